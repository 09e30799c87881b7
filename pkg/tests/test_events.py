from unittest import mock

import pytest
import sympy as sp

import mvlab.events
from mvlab.epipolar import solve_seven_point_batch
from mvlab.numeric_core import BinaryForm, binary_form_roots


def test_event_register() -> None:
    first_callback = mock.Mock()
    second_callback = mock.Mock()

    with pytest.raises(ValueError, match="event_type must be a events.EventTypes enum"):
        mvlab.events.register("Message", first_callback)

    mvlab.events.register(mvlab.events.EventTypes.Message, first_callback)
    result = mvlab.events.get_event_callback(mvlab.events.EventTypes.Message)
    assert result == [first_callback]

    mvlab.events.register(mvlab.events.EventTypes.Progress, second_callback)
    assert mvlab.events.get_event_callback(mvlab.events.EventTypes.Progress) == [second_callback]

    mvlab.events.register(mvlab.events.EventTypes.Message, second_callback)
    # the list is not guaranteed to be in the same order as inputted hence the set
    assert set(mvlab.events.get_event_callback(mvlab.events.EventTypes.Message)) == {first_callback, second_callback}

    mvlab.events.clear()
    assert mvlab.events.get_event_callback(mvlab.events.EventTypes.Progress) == []
    assert mvlab.events.get_event_callback(mvlab.events.EventTypes.Message) == []


def test_event_notify() -> None:
    first_callback = mock.Mock()
    second_callback = mock.Mock()
    mvlab.events.register(mvlab.events.EventTypes.Message, first_callback)
    mvlab.events.register(mvlab.events.EventTypes.Progress, second_callback)

    mvlab.events.notify(mvlab.events.EventTypes.Message, "Hello World")
    first_callback.assert_called_once_with("Hello World")
    second_callback.assert_not_called()

    data = mvlab.events.ProgressEventData("seven-point", 0.5)
    mvlab.events.notify(mvlab.events.EventTypes.Progress, data)
    first_callback.assert_called_once()
    second_callback.assert_called_once_with(data)

    mvlab.events.clear()
    mvlab.events.notify(mvlab.events.EventTypes.Message, "Hello World")
    mvlab.events.notify(mvlab.events.EventTypes.Progress, data)
    assert first_callback.call_count == 1
    assert second_callback.call_count == 1


def test_float_root_fallback_message() -> None:
    """Factoring a form with an irreducible quadratic factor should report the switch to float roots."""
    callback = mock.Mock()
    mvlab.events.register(mvlab.events.EventTypes.Message, callback)
    roots = binary_form_roots(BinaryForm((sp.Integer(1), sp.Integer(0), sp.Integer(-2))))

    assert len(roots) == 2
    callback.assert_called_once()
    assert "floating point" in callback.call_args[0][0]


def test_batch_progress() -> None:
    """Solving a batch should report progress once per instance, ending at completion."""
    callback = mock.Mock()
    mvlab.events.register(mvlab.events.EventTypes.Progress, callback)
    results = solve_seven_point_batch([[], []])

    assert all(isinstance(result, ValueError) for result in results)
    assert callback.call_count == 2
    assert callback.call_args[0][0].percent == 1.0
