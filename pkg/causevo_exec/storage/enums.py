from enum import Enum


class RunStatus(Enum):
    """Status of a command run."""
    STARTED = "started"
    COMPLETED = "completed"
    FAILED = "failed"
    ERROR = "error"

    @property
    def exit_code(self) -> int:
        """0 pass, 1 property failure, 2 input error."""
        return {RunStatus.COMPLETED: 0, RunStatus.FAILED: 1, RunStatus.ERROR: 2}.get(self, 1)
