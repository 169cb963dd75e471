from contextvars import ContextVar
from datetime import datetime
from logging import getLogger, Filter
from os import getenv, path
import logging.config

_run_context: ContextVar = ContextVar('grpcalc_run_context', default={})


def set_context(**attributes) -> None:
    """Attach attributes (command, input_path) to every record logged from now on."""
    _run_context.set(dict(attributes))


def get_context() -> dict:
    return dict(_run_context.get())


class ContextFilter(Filter):
    """A filter injecting the running command into the log."""

    def filter(self, record):
        context = _run_context.get()
        for attr in ['command', 'input_path']:
            value = context.get(attr)
            setattr(record, attr, value if value is not None else '-')
        return True


def configure() -> None:
    """Load the logging configuration; LOGGING_FILE_CONFIG wins over the packaged file."""
    config_file = getenv('LOGGING_FILE_CONFIG') or path.join(path.dirname(__file__), 'logging.conf')
    logging.config.fileConfig(config_file, disable_existing_loggers=False)
    level = getenv('LOGGING_ROOT_LEVEL')
    if level:
        getLogger().setLevel(level.upper())


def getLoggers():
    """Create default loggers."""
    mainLog = getLogger('grpcalc')
    accountLog = getLogger('grpcalc.accounting')
    accountLog.addFilter(ContextFilter())

    def accountLogger(execution_start, execution_time, command, success=1, comment=None, input_path='-'):
        assert isinstance(execution_start, datetime)
        success = bool(success)
        execution_start = execution_start.strftime("%Y-%m-%d %H:%M:%S")
        accountLog.info(f"command={command}, success={success}, execution_start={execution_start}, "
                        f"execution_time={execution_time}, comment={comment} input={input_path}")
    return mainLog, accountLogger
