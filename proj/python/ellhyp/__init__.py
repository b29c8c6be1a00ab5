"""Evaluate multiple elliptic hypergeometric series and verify their identities."""

import json as _json

from . import _core
from ._core import (
    ConstraintViolated,
    Error,
    Gauge,
    InvalidKernel,
    KernelSpec,
    LengthMismatch,
    NonConvergent,
    PoleHit,
    SamplingExhausted,
    ScaledComplex,
    SchemaError,
    SingularMatrix,
    Termination,
    TerminationUnsatisfied,
    bracket,
    bracket_factorial,
    cauchy_det_closed,
    cauchy_det_numeric,
    e_series,
    e_single,
    eval_json,
    exponential_trig_kernel,
    list_identities,
    phi,
    phi_basic,
    relative_difference,
    w_series,
)

__version__ = "0.1.0"

_KERNELS = ("rational", "trigonometric", "elliptic")


def _range(value):
    if isinstance(value, int):
        return (value, value)
    lo, hi = value
    return (int(lo), int(hi))


def verify(identity="all", kernel="all", m=(1, 2), n=(1, 2), N=(0, 3), M=(1, 4),
           alpha=None, trials=3, seed=0, tol=None, gauge="random",
           break_balance=False, jobs=1):
    """Run a verification campaign and return one dict per case.

    ``identity`` and ``kernel`` take a name, a list of names, or "all".
    Ranges are an int or a (lo, hi) pair.
    """
    if isinstance(identity, str):
        identity = [identity]
    if "all" in identity:
        identity = [info["name"] for info in list_identities()]
    if isinstance(kernel, str):
        kernel = [kernel]
    if "all" in kernel:
        kernel = list(_KERNELS)
    if gauge not in ("random", "off"):
        raise SchemaError("gauge: expected 'random' or 'off'")
    text = _core.run_suite_jsonl(
        list(identity), list(kernel), _range(m), _range(n), _range(N), _range(M),
        None if alpha is None else list(alpha), int(trials), int(seed), tol,
        gauge == "random", bool(break_balance), int(jobs))
    return [_json.loads(line) for line in text.splitlines()]

