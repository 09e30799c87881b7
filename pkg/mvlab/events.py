from dataclasses import dataclass
from enum import Enum
from typing import Callable, Union


class EventTypes(Enum):
    """Defines the kinds of event mvlab reports while it works"""

    Message = 0
    Progress = 1


@dataclass
class ProgressEventData:
    """The data sent with a progress event.

    Parameters
    ----------
    message : str
        A short description of the task being tracked.
    percent : float
        The fraction of the task that is complete, between 0 and 1.

    """

    message: str = ""
    percent: float = 0.0


def notify(event_type: EventTypes, data: Union[str, ProgressEventData]) -> None:
    """Calls registered callbacks with the data when event type has
    been triggered.

    Parameters
    ----------
    event_type : EventTypes
        The event type that was triggered.
    data : str or ProgressEventData
        The data sent by the event. The message event data is a string.

    """
    callbacks = __event_callbacks[event_type]
    for callback in list(callbacks):
        callback(data)


def get_event_callback(event_type: EventTypes) -> list[Callable[[Union[str, ProgressEventData]], None]]:
    """Returns all callbacks registered for the given event type.

    Parameters
    ----------
    event_type : EventTypes
        The event type.

    Returns
    -------
    callback : list[Callable[[Union[str, ProgressEventData]], None]]
        The callbacks for the event type.

    """
    return list(__event_callbacks[event_type])


def register(event_type: EventTypes, callback: Callable[[Union[str, ProgressEventData]], None]) -> None:
    """Registers a new callback for the event type.

    Parameters
    ----------
    event_type : EventTypes
        The event type to register.
    callback : Callable[[Union[str, ProgressEventData]], None]
        The callback for when the event is triggered.

    """
    if not isinstance(event_type, EventTypes):
        raise ValueError("event_type must be a events.EventTypes enum")

    __event_callbacks[event_type].add(callback)


def clear() -> None:
    """Clears all event callbacks."""
    for key in __event_callbacks:
        __event_callbacks[key] = set()


__event_callbacks = {EventTypes.Message: set(), EventTypes.Progress: set()}
