"""Cooperative cancellation for long-running engine loops.

Jobs in the HTTP service install a `threading.Event` here; enumeration loops
call `checkpoint()` at iteration boundaries and abort with
OperationCancelled when the event is set.  Outside the service the default
token is inert.
"""

import contextvars

from .errors import OperationCancelled

_cancel_event = contextvars.ContextVar("lclre_cancel_event", default=None)


def install(event):
    """Install a cancellation event for the current context; returns a token
    that can be passed to `uninstall`."""
    return _cancel_event.set(event)


def uninstall(token):
    _cancel_event.reset(token)


def checkpoint():
    """Raise OperationCancelled if the current context has been cancelled."""
    event = _cancel_event.get()
    if event is not None and event.is_set():
        raise OperationCancelled("operation cancelled")
