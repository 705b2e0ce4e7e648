import json
import logging
from datetime import datetime

LOGGER_NAME = "operator_lab"


class JSONFormatter(logging.Formatter):
    """One JSON object per record: level, call site, ``extra=`` fields, exception."""

    def format(self, record):
        log_record = {
            "timestamp": datetime.fromtimestamp(record.created).isoformat() + "Z",
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "module": record.module,
            "function": record.funcName,
            "line": record.lineno,
        }

        if hasattr(record, "extra_data"):
            log_record.update(record.extra_data)

        if record.exc_info:
            log_record["exception"] = {
                "type": record.exc_info[0].__name__,
                "message": str(record.exc_info[1]),
                "traceback": self.formatException(record.exc_info),
            }

        # numpy scalars in extra data
        return json.dumps(log_record, default=str)


class JsonLoggerAdapter(logging.LoggerAdapter):
    def process(self, msg, kwargs):
        if "extra" in kwargs:
            kwargs["extra"] = {"extra_data": kwargs["extra"]}
        return msg, kwargs


json_logger = JsonLoggerAdapter(logging.getLogger(LOGGER_NAME), {})


def init_logger(app=None, level=None):
    """
    Initialize the laboratory logger.

    The level is taken from ``level`` when given, otherwise from
    ``app.config["LOG_LEVEL"]``, otherwise INFO. Safe to call more than once:
    the Flask factory and the CLI both call it.

    Args:
        app: Flask application instance (optional).
        level: Log level name overriding the app config (optional).

    Returns:
        JsonLoggerAdapter: The configured JSON logger adapter.
    """
    global json_logger

    log_level = level or (app.config.get("LOG_LEVEL", "INFO") if app else "INFO")
    resolved = getattr(logging, str(log_level).upper(), logging.INFO)

    logger = logging.getLogger(LOGGER_NAME)
    logger.setLevel(resolved)
    logger.propagate = False

    stream_handlers = [h for h in logger.handlers if isinstance(h, logging.StreamHandler)]
    if not stream_handlers:
        handler = logging.StreamHandler()  # stderr; stdout is reserved for reports
        handler.setFormatter(JSONFormatter())
        handler.setLevel(resolved)
        logger.addHandler(handler)
    else:
        for h in stream_handlers:
            h.setLevel(resolved)

    json_logger = JsonLoggerAdapter(logger, {})
    return json_logger
