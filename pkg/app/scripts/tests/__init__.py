# __init__.py for /app/scripts/tests: Enables pytest discovery for the command-line and configuration tests.
