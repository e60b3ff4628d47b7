"""The bundled demo class set: a console-style widget kit and helpers.

The shapes mirror a small GUI toolkit because that exercises every
bridge path at once: constructors with overloads (Frame takes an
optional title), static fields (BorderLayout slot names), fields holding
other host objects (Frame slots), an interface invoked from the host
side (ActionListener firing on Button.press), and statics with
same-arity overloads (MathUtil.describe).  Nothing renders; "show" just
flips a flag scripts can read back.

The bare "Point" class (two float fields starting at 0, one move
method) is the minimal transparency example; demo.Point is the same
shape plus an (x, y) constructor.  demo.Greeter and demo.Speaker exist
for export scenarios: both have zero-argument constructors so a script
table can be backed by a real instance, with Speaker offering three
methods to mix and match.
"""

import json
from importlib import resources

from .interp import Interpreter
from .manifest import register_from_manifest
from .objects import format_number
from .registry import INTEGER, HostRegistry


def demo_bodies(registry) -> dict:
    """Native bodies for the demo manifest, closed over the registry."""

    def point_init(self, x, y):
        self.fields["x"] = x
        self.fields["y"] = y

    def point_move(self, dx, dy):
        self.fields["x"] += dx
        self.fields["y"] += dy

    def component_describe(self):
        return "component:" + self.fields["id"]

    def frame_init(self, title):
        self.fields["title"] = title

    slots = {"North": "north", "South": "south", "East": "east",
             "West": "west", "Center": "center"}

    def frame_add(self, where, comp):
        slot = slots.get(where)
        if slot is None:
            raise ValueError(f"unknown layout slot {where!r}")
        self.fields[slot] = comp

    def frame_pack(self):
        self.fields["packed"] = True

    def frame_show(self):
        self.fields["visible"] = True

    def textarea_set(self, s):
        self.fields["text"] = s

    def textarea_get(self):
        return self.fields["text"]

    def add_listener(self, listener):
        self.fields["listener"] = listener

    def fire_action(self):
        listener = self.fields["listener"]
        if listener is None:
            return
        ev = registry.instantiate("demo.ActionEvent", [self])
        registry.call_method(listener, "actionPerformed", [ev])

    def button_init(self, label):
        self.fields["label"] = label

    def event_init(self, source):
        self.fields["source"] = source

    def counter_inc(self):
        self.fields["count"] += 1

    return {
        "Point.move/2": point_move,
        "demo.Point.<init>/2": point_init,
        "demo.Point.move/2": point_move,
        "demo.Component.describe/0": component_describe,
        "demo.Frame.<init>/1": frame_init,
        "demo.Frame.add/2": frame_add,
        "demo.Frame.pack/0": frame_pack,
        "demo.Frame.show/0": frame_show,
        "demo.TextArea.setText/1": textarea_set,
        "demo.TextArea.getText/0": textarea_get,
        "demo.EventSource.addActionListener/1": add_listener,
        "demo.EventSource.fireAction/0": fire_action,
        "demo.ActionEvent.<init>/1": event_init,
        "demo.Button.<init>/1": button_init,
        "demo.Button.press/0": fire_action,
        "demo.Greeter.hello/0": lambda self: "hello",
        "demo.Greeter.bye/0": lambda self: "goodbye",
        "demo.Speaker.hello/0": lambda self: "base:hello",
        "demo.Speaker.bye/0": lambda self: "base:bye",
        "demo.Speaker.wave/0": lambda self: "base:wave",
        "demo.MathUtil.twice/1": lambda x: x * 2.0,
        "demo.MathUtil.describe(float)": _describe_number,
        "demo.MathUtil.describe(text)": lambda s: "text " + s,
        "demo.MathUtil.intArray/1": lambda n: registry.array_new(INTEGER, n),
        "demo.MathUtil.greet/1":
            lambda g: registry.call_method(g, "hello", []),
        "demo.MathUtil.farewell/1":
            lambda g: registry.call_method(g, "bye", []),
        "bench.Counter.inc/0": counter_inc,
        "bench.Counter.empty/0": lambda self: None,
        "bench.Counter.value/0": lambda self: self.fields["count"],
    }


def _describe_number(x):
    return "number " + format_number(x)


def load_demo_manifest() -> dict:
    text = resources.files("bridgescript").joinpath(
        "demo_manifest.json").read_text(encoding="utf-8")
    return json.loads(text)


def build_demo_registry(validate: bool = False) -> HostRegistry:
    reg = HostRegistry(validate_invokes=validate)
    register_from_manifest(reg, load_demo_manifest(), demo_bodies(reg))
    reg.freeze()
    return reg


def build_demo_interpreter(out=None) -> Interpreter:
    return Interpreter(build_demo_registry(), out=out)
