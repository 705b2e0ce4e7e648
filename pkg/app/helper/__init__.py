from .base_response import response_success, response_error
from .logger import json_logger, init_logger
from .report_writer import report_json, write_report

__all__ = [
    "response_success",
    "response_error",
    "json_logger",
    "init_logger",
    "report_json",
    "write_report",
]
