from .verify import CheckResult, run_identity_suite
