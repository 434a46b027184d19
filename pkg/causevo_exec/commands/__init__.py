from .build_sigma import execute_build_sigma
from .check_causal import execute_check_causal
from .demo import execute_demo
from .transform import execute_transform
from .verify_field import execute_verify_field

COMMANDS = {
    "check-causal": execute_check_causal,
    "build-sigma": execute_build_sigma,
    "verify-field": execute_verify_field,
    "transform": execute_transform,
    "demo": execute_demo,
}

__all__ = [
    "COMMANDS",
    "execute_build_sigma",
    "execute_check_causal",
    "execute_demo",
    "execute_transform",
    "execute_verify_field",
]
