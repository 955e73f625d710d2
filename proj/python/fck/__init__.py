"""Free cumulants, subordination, conditional expectations and Lukacs checks."""

import json
from fractions import Fraction

from . import _fck
from ._fck import (
    CapabilityError,
    DomainError,
    FckError,
    ParseError,
    ResolutionError,
    count_partitions,
    join,
    partitions,
    set_precision,
)

__all__ = [
    "CapabilityError",
    "DomainError",
    "FckError",
    "ParseError",
    "ResolutionError",
    "condexp_pairing",
    "count_partitions",
    "cumulants",
    "direct_check",
    "dual_check",
    "forward_check",
    "join",
    "joint_moment",
    "moments",
    "omega",
    "params_from_constants",
    "partitions",
    "regression_check",
    "set_precision",
    "transform",
    "verify",
]


def _value(text, backend):
    return Fraction(text) if backend == "exact" else float(text)


def _values(texts, backend):
    return [_value(t, backend) for t in texts]


def _text(x):
    return str(x)


def moments(law, order=8, backend="exact"):
    return _values(_fck.moments(law, order, backend), backend)


def cumulants(moment_list, kind="free"):
    return [Fraction(t) for t in _fck.cumulants([_text(m) for m in moment_list], kind)]


def transform(law, which="S", order=8, backend="exact"):
    return _values(_fck.transform(law, which, order, backend), backend)


def joint_moment(left, right, word, order=16, backend="exact"):
    return _value(_fck.joint_moment(left, right, word, order, backend), backend)


def omega(left, right, route="boolean", order=8, backend="exact"):
    w1, w2 = _fck.omega(left, right, route, order, backend)
    return _values(w1, backend), _values(w2, backend)


def condexp_pairing(left, right, f="id", g="id", order=6, m_max=3, backend="exact"):
    return [_values(s, backend) for s in _fck.condexp_pairing(left, right, f, g, order, m_max, backend)]


def params_from_constants(alpha, b, c):
    return {k: Fraction(v) for k, v in _fck.params_from_constants(_text(alpha), _text(b), _text(c)).items()}


def regression_check(alpha, b=None, c=None, d=None, order=11, backend="exact"):
    opt = lambda x: None if x is None else _text(x)
    return json.loads(_fck.regression_check(_text(alpha), opt(b), opt(c), opt(d), order, backend))


def forward_check(sigma=1, theta=2, alpha_v=1, n_max=4):
    return json.loads(_fck.forward_check(_text(sigma), _text(theta), _text(alpha_v), n_max))


def dual_check(lam=1, kappa=1, alpha=1, max_order=4):
    return json.loads(_fck.dual_check(_text(lam), _text(kappa), _text(alpha), max_order))


def direct_check(lam=2, kappa=2, alpha=1, max_order=4, approx_degree=40, tolerance="1e-6"):
    return json.loads(_fck.direct_check(_text(lam), _text(kappa), _text(alpha), max_order, approx_degree, _text(tolerance)))


def verify(scope="all", order=8, backend="exact", seed=1):
    return json.loads(_fck.verify(scope, order, backend, seed))
