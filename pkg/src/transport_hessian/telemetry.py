from __future__ import annotations

import logging
import sys

from opentelemetry import trace
from opentelemetry.sdk.resources import SERVICE_NAME, SERVICE_VERSION, Resource
from opentelemetry.sdk.trace import TracerProvider
from opentelemetry.sdk.trace.export import ConsoleSpanExporter, SimpleSpanProcessor

from . import __version__

_configured = False


def setup_telemetry(*, service_name: str = "transport-hessian", console: bool = False) -> None:
    """Install a tracer provider once; `console` exports finished spans to stderr."""
    global _configured
    if _configured:
        return
    resource = Resource(attributes={SERVICE_NAME: service_name, SERVICE_VERSION: __version__})
    provider = TracerProvider(resource=resource)
    if console:
        provider.add_span_processor(SimpleSpanProcessor(ConsoleSpanExporter(out=sys.stderr)))
        logging.getLogger(__name__).info("console span exporter enabled for %s", service_name)
    trace.set_tracer_provider(provider)
    _configured = True


def get_tracer(name: str) -> trace.Tracer:
    return trace.get_tracer(name)


__all__ = ["setup_telemetry", "get_tracer"]
