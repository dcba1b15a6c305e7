# SPDX-License-Identifier: GPL-2.0-or-later

__author__ = "se3form contributors"
__status__ = "production"
__version__ = "1.0"
__date__ = "18 Oct 2026"

import numbers

from . import common


# pylint: disable=W0622
class _Property:
    def __init__(self, name, description, default=None, key=None,
                 required=True):
        self.name = name
        self.description = description
        self.default = default
        self.key = key
        self.required = required
        self.attr = None

    def __set_name__(self, owner, attr):
        self.attr = attr
        if self.key is None:
            self.key = attr

    def __get__(self, obj, objtype=None):
        if obj is None:
            return self
        return obj.__dict__.get(self.attr, self.default)

    def __set__(self, obj, value):
        try:
            obj.__dict__[self.attr] = self.coerce(value)
        except TypeError as e:
            raise common.ParseError(str(e), field=self.key) from e

    def coerce(self, value):
        return value

    def check(self, value):
        pass

    def _invalid_type(self, value, expected):
        return TypeError(
            "{} must be {}, got {!r}".format(self.name, expected, value))


class FloatProperty(_Property):
    def __init__(self, name, description, default=None, key=None,
                 required=True, min=None, max=None, min_exclusive=False):
        super().__init__(name, description, default, key, required)
        self.min = min
        self.max = max
        self.min_exclusive = min_exclusive

    def coerce(self, value):
        if isinstance(value, bool) or not isinstance(value, numbers.Real):
            raise self._invalid_type(value, "a real number")
        return float(value)

    def check(self, value):
        if value != value:
            raise common.ValidationError(
                "{} is NaN".format(self.name), constraint=self.key)
        if self.min is not None:
            if self.min_exclusive and value <= self.min:
                raise common.ValidationError(
                    "{} must be greater than {}, got {}"
                    .format(self.name, self.min, value),
                    constraint="{} > {}".format(self.key, self.min))
            if not self.min_exclusive and value < self.min:
                raise common.ValidationError(
                    "{} must be at least {}, got {}"
                    .format(self.name, self.min, value),
                    constraint="{} >= {}".format(self.key, self.min))
        if self.max is not None and value > self.max:
            raise common.ValidationError(
                "{} must be at most {}, got {}"
                .format(self.name, self.max, value),
                constraint="{} <= {}".format(self.key, self.max))


class IntProperty(_Property):
    def __init__(self, name, description, default=None, key=None,
                 required=True, min=None, max=None):
        super().__init__(name, description, default, key, required)
        self.min = min
        self.max = max

    def coerce(self, value):
        if isinstance(value, bool):
            raise self._invalid_type(value, "an integer")
        if isinstance(value, numbers.Integral):
            return int(value)
        # JSON writers may emit 2e5 for an integer field
        if isinstance(value, numbers.Real) and float(value).is_integer():
            return int(value)
        raise self._invalid_type(value, "an integer")

    def check(self, value):
        if self.min is not None and value < self.min:
            raise common.ValidationError(
                "{} must be at least {}, got {}"
                .format(self.name, self.min, value),
                constraint="{} >= {}".format(self.key, self.min))
        if self.max is not None and value > self.max:
            raise common.ValidationError(
                "{} must be at most {}, got {}"
                .format(self.name, self.max, value),
                constraint="{} <= {}".format(self.key, self.max))


class BoolProperty(_Property):
    def coerce(self, value):
        if not isinstance(value, bool):
            raise self._invalid_type(value, "true or false")
        return value


class EnumProperty(_Property):
    def __init__(self, name, description, items, default=None, key=None,
                 required=True):
        super().__init__(name, description, default, key, required)
        self.items = items

    @property
    def identifiers(self):
        return [item[0] for item in self.items]

    def coerce(self, value):
        if not isinstance(value, str):
            raise self._invalid_type(value, "a string")
        return value

    def check(self, value):
        if value not in self.identifiers:
            raise common.ValidationError(
                "{} must be one of {}, got '{}'"
                .format(self.name, ", ".join(self.identifiers), value),
                constraint="{} in {{{}}}".format(
                    self.key, ", ".join(self.identifiers)))


class PropertyGroup:
    """
    Configuration object whose fields are declared as properties.

    Keyword arguments override the declared defaults and the result is
    validated on construction.
    """

    def __init__(self, **kwargs):
        props = {p.attr: p for p in self.properties()}
        for attr, value in kwargs.items():
            if attr not in props:
                raise common.ValidationError(
                    "Unknown property '{}' for {}"
                    .format(attr, type(self).__name__), constraint=attr)
            setattr(self, attr, value)
        self.validate()

    @classmethod
    def properties(cls):
        props = []
        for klass in reversed(cls.__mro__):
            for value in vars(klass).values():
                if isinstance(value, _Property):
                    props.append(value)
        return props

    def validate(self):
        for prop in self.properties():
            prop.check(getattr(self, prop.attr))
        return self

    @classmethod
    def from_dict(cls, data, section=None):
        if not isinstance(data, dict):
            raise common.ParseError("Expected an object",
                                    field=section or cls.__name__)
        props = {p.key: p for p in cls.properties()}
        for key in data:
            if key not in props:
                raise common.ParseError(
                    "Unknown key", field=_qualified(section, key))

        kwargs = {}
        for key, prop in props.items():
            if key not in data:
                if prop.required:
                    raise common.ParseError(
                        "Missing required key", field=_qualified(section, key))
                continue
            try:
                kwargs[prop.attr] = prop.coerce(data[key])
            except TypeError as e:
                raise common.ParseError(
                    str(e), field=_qualified(section, key)) from e
        return cls(**kwargs)

    def to_dict(self):
        return {p.key: getattr(self, p.attr) for p in self.properties()}

    def replace(self, **kwargs):
        values = {p.attr: getattr(self, p.attr) for p in self.properties()}
        values.update({k: v for k, v in kwargs.items() if v is not None})
        return type(self)(**values)

    def __eq__(self, other):
        if type(self) is not type(other):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def __repr__(self):
        return "{}({})".format(
            type(self).__name__,
            ", ".join("{}={!r}".format(p.attr, getattr(self, p.attr))
                      for p in self.properties()))


def _qualified(section, key):
    if section is None:
        return key
    return "{}.{}".format(section, key)


class ControlConfig(PropertyGroup):
    gain = FloatProperty(
        name="Gain",
        description="Scalar gain k of the gradient control law",
        default=1.0,
        min=0.0,
        min_exclusive=True
    )
    law = EnumProperty(
        name="Law",
        description="Constraint family the potential is built from",
        items=[
            ('BearingOnly', "Bearing Only", "Bearing constraints only"),
            ('Mixed', "Mixed", "Bearing and distance constraints"),
        ],
        default='BearingOnly'
    )
    mode = EnumProperty(
        name="Mode",
        description="How control inputs are assembled",
        items=[
            ('FullGradient', "Full Gradient",
             "Exact negated gradient of the potential"),
            ('Local', "Local",
             "Only terms measurable on outgoing edges"),
        ],
        default='FullGradient'
    )
    normalized = BoolProperty(
        name="Normalized",
        description="Divide the gradient by the constraint residual norm",
        default=False,
        required=False
    )


class SimConfig(PropertyGroup):
    dt = FloatProperty(
        name="Time Step",
        description="Integration time step in seconds",
        default=1e-2,
        min=0.0,
        min_exclusive=True
    )
    max_steps = IntProperty(
        name="Max Steps",
        description="Maximum number of integration steps",
        default=200000,
        min=1
    )
    convergence_tol = FloatProperty(
        name="Convergence Tolerance",
        description="Run stops once the potential is at or below this value",
        default=1e-8,
        key="tol",
        min=0.0
    )
    integrator = EnumProperty(
        name="Integrator",
        description="Time integration scheme",
        items=[
            ('EulerExp', "Euler Exp",
             "Explicit Euler with exponential rotation update"),
            ('RK4Exp', "RK4 Exp",
             "4-stage Runge-Kutta on the exponential chart"),
        ],
        default='EulerExp'
    )
    renorm_interval = IntProperty(
        name="Renormalization Interval",
        description="Rotations are re-orthonormalized every N steps",
        default=100,
        min=1,
        required=False
    )
    record_interval = IntProperty(
        name="Record Interval",
        description="A trajectory sample is kept every N steps",
        default=1,
        min=1,
        required=False
    )


class PerturbationConfig(PropertyGroup):
    seed = IntProperty(
        name="Seed",
        description="Seed of the initial state generator",
        default=0,
        min=0
    )
    position_amplitude = FloatProperty(
        name="Position Amplitude",
        description="Maximum offset per axis from the target position",
        default=0.1,
        min=0.0
    )
    rotation_amplitude = FloatProperty(
        name="Rotation Amplitude",
        description="Maximum initial rotation angle in radians",
        default=0.3,
        min=0.0,
        max=3.141592653589793
    )
