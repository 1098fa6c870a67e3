# __init__.py for /app/engine/tests: Enables pytest discovery and relative imports for engine unit tests.