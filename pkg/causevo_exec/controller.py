import json
from typing import Any, Awaitable, Callable, Dict

from pydantic import ValidationError

from causevo.io.schema import SchemaError
from causevo.logging_config import logger, run_log
from causevo.spacetime.model import GridMismatchError
from causevo.spacetime.temporal import FrameNotSupportedError
from causevo.testfns.bumps import TestFunctionSupportError
from causevo_exec.run_config import RunConfig
from causevo_exec.storage.enums import RunStatus
from causevo_exec.storage.objectstore import ObjectStore

INPUT_ERRORS = (SchemaError, FrameNotSupportedError, ValidationError, GridMismatchError, TestFunctionSupportError)

RUN_RECORD = "run_record"
RUN_LOG = "run.log"


def status_of(result: Dict[str, Any]) -> RunStatus:
    if result.get("error_message") is None:
        return RunStatus.COMPLETED
    return RunStatus.ERROR if result.get("input_error") else RunStatus.FAILED


async def run_command_with_record(
    config: RunConfig,
    command_func: Callable[[RunConfig, ObjectStore], Awaitable[Dict[str, Any]]],
) -> int:
    """
    Run one command, write its run record next to its artifacts and return the exit code.
    Everything logged during the run is also kept in run.log.
    """
    store = ObjectStore(str(config.output_dir))
    config.output_dir.mkdir(parents=True, exist_ok=True)

    with run_log(config.output_dir / RUN_LOG):
        logger.info(f"Started {config.command} run; output in {config.output_dir}")
        try:
            result = await command_func(config, store)
        except INPUT_ERRORS as e:
            logger.error(f"Input error: {e}")
            result = {"error_message": str(e), "input_error": True}
        except Exception as e:
            logger.error(f"❌ Unhandled error: {e}")
            result = {"error_message": f"{type(e).__name__}: {e}", "input_error": False}

        run_status = status_of(result)
        await store.save_json(
            {
                "command": config.command,
                "input": config.as_record(),
                "status": run_status.value,
                "result": result,
            },
            RUN_RECORD,
        )

        logger.info("Command result:")
        logger.info(json.dumps(result, indent=2, default=str))
        logger.info(f"Command completed with status: {run_status.value}")
    if result.get("error_message") is not None:
        print(result["error_message"])
    return run_status.exit_code
