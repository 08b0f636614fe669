"""Command-line front end: analyze, region-map, eigen, expansions, evolve.

Single objects are emitted as JSON, grids as CSV; both carry the schema
string "strata/1".  Tri-state verdicts are serialized as the strings
"true" / "false" / "boundary", never as booleans, and every float is
rendered with 17 significant digits so output is diff-able and round-trips
exactly.  Exit codes: 0 success, 2 input error, 3 regime guard.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .errors import DegenerateLayer, NonRealSpectrum, OutOfRegime, StrataError
from .eigen import characteristic_fields, eigendecomposition, expansions, spectrum
from .evolution import PeriodicField, evolve_linear, mode_growth, well_posedness_bound
from .hyperbolicity import Regime, classify, critical_froude
from .model_matrices import (
    AugmentedState,
    LayerState,
    NondimState,
    PhysParams,
    nondimensionalize,
    state_from_nondim,
)
from .verdict import TriState

SCHEMA = "strata/1"

__all__ = ["main"]


class CliInputError(Exception):
    """Invalid input document or flag combination: exit code 2."""


class RegimeGuardError(Exception):
    """Requested operation refused for the state's regime: exit code 3."""


# --- serialization -----------------------------------------------------------


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def render_json(obj, indent: int = 0) -> str:
    """JSON with floats at 17 significant digits (stdlib dumps rounds them)."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f"{inner}{json.dumps(str(k))}: {render_json(v, indent + 1)}"
            for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [f"{inner}{render_json(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, TriState):
        return json.dumps(obj.value)
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        if math.isnan(obj):
            return '"nan"'
        if math.isinf(obj):
            return '"inf"' if obj > 0 else '"-inf"'
        return _fmt(obj)
    if isinstance(obj, complex):
        return render_json({"re": obj.real, "im": obj.imag}, indent)
    if obj is None:
        return "null"
    return json.dumps(obj)


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, "r") as fh:
            return fh.read()
    except OSError as e:
        raise CliInputError(f"cannot read {path}: {e}") from e


def _write_text(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w") as fh:
        fh.write(text)


# --- input documents ----------------------------------------------------------


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise CliInputError(message)


def _load_json(path: str) -> dict:
    try:
        doc = json.loads(_read_text(path))
    except json.JSONDecodeError as e:
        raise CliInputError(f"malformed JSON: {e}") from e
    _require(isinstance(doc, dict), "input document must be a JSON object")
    _require(doc.get("schema") == SCHEMA, f'input must declare "schema": "{SCHEMA}"')
    return doc


def parse_state_document(doc: dict):
    """Parse a StateDocument into (state, params, grad_b).

    The state is a LayerState, an AugmentedState (when vorticities are
    present) or, for "nondim" documents, the canonical dimensional
    representative with h1 = 1.
    """
    params = doc.get("params")
    _require(isinstance(params, dict) and "gamma" in params, 'missing "params.gamma"')
    try:
        p = PhysParams(
            gamma=params["gamma"],
            g=params.get("g", 9.81),
            f=params.get("f", 0.0),
        )
    except (TypeError, ValueError) as e:
        raise CliInputError(f"invalid params: {e}") from e

    has_state = "state" in doc
    has_nondim = "nondim" in doc
    _require(has_state != has_nondim, 'exactly one of "state" or "nondim" required')
    try:
        if has_state:
            st = doc["state"]
            _require(isinstance(st, dict), '"state" must be an object')
            base = ("h1", "h2", "u1", "u2", "v1", "v2")
            _require(all(k in st for k in base), f'"state" requires fields {base}')
            if "w1" in st or "w2" in st:
                _require(
                    "w1" in st and "w2" in st, "augmented state needs both w1 and w2"
                )
                s = AugmentedState(*[st[k] for k in base + ("w1", "w2")])
            else:
                s = LayerState(*[st[k] for k in base])
        else:
            ndd = doc["nondim"]
            _require(isinstance(ndd, dict), '"nondim" must be an object')
            _require(
                all(k in ndd for k in ("Fx", "Fy", "h")),
                '"nondim" requires fields Fx, Fy, h',
            )
            s = state_from_nondim(NondimState(ndd["Fx"], ndd["Fy"], ndd["h"]), p)
    except (TypeError, ValueError, DegenerateLayer) as e:
        raise CliInputError(f"invalid state: {e}") from e

    grad_b = doc.get("grad_b", [0.0, 0.0])
    _require(
        isinstance(grad_b, (list, tuple)) and len(grad_b) == 2,
        '"grad_b" must be a pair',
    )
    return s, p, (float(grad_b[0]), float(grad_b[1]))


def _state_json(s) -> dict:
    keys = ("h1", "h2", "u1", "u2", "v1", "v2")
    if isinstance(s, AugmentedState):
        keys += ("w1", "w2")
    return {k: getattr(s, k) for k in keys}


# --- analyze -----------------------------------------------------------------


def _spectrum_json(sp) -> dict:
    out = {"real": sp.real}
    for name in ("mu1_minus", "mu1_plus", "mu2_minus", "mu2_plus"):
        v = getattr(sp, name)
        out[name] = complex(v) if not sp.real else float(v.real)
    out["mu3_minus"] = sp.mu3_minus
    out["mu3_plus"] = sp.mu3_plus
    return out


def _degeneracy_reasons(s, p: PhysParams) -> list:
    reasons = []
    if p.gamma >= 1.0:
        reasons.append("m3_nonpositive")
    if s.h1 <= 0.0 or s.h2 <= 0.0:
        reasons.append("nonpositive_layer")
    return reasons


def cmd_analyze(args) -> int:
    doc = _load_json(args.input)
    s, p, _ = parse_state_document(doc)
    base = s.base if isinstance(s, AugmentedState) else s
    report = classify(base, p, tol=args.tol)
    if args.strict and report.regime == Regime.DEGENERATE:
        raise RegimeGuardError("degenerate state analysis refused under --strict")

    out = {
        "schema": SCHEMA,
        "params": {"gamma": p.gamma, "g": p.g, "f": p.f},
        "state": _state_json(s),
        "hyperbolic_1d": report.hyperbolic_1d,
        "hyperbolic_2d": report.hyperbolic_2d,
        "symmetrizable": TriState.TRUE if report.symmetrizable else TriState.FALSE,
        "regime": report.regime.value,
        "reasons": _degeneracy_reasons(base, p),
        "minors": list(report.minors) if report.minors is not None else None,
        "f_crit": (
            {"f_minus": report.f_crit.f_minus, "f_plus": report.f_crit.f_plus}
            if report.f_crit is not None
            else None
        ),
    }
    try:
        sp = spectrum(base, p)
        out["spectrum"] = _spectrum_json(sp)
    except DegenerateLayer:
        out["spectrum"] = None

    out["diagonalizable"] = TriState.FALSE
    out["fields"] = None
    try:
        dec = eigendecomposition(base, p)
        out["diagonalizable"] = dec.diagonalizable
        fields = characteristic_fields(s, p)
        out["fields"] = {
            k: {"kind": f.kind, "dot": f.dot, "scale": f.scale}
            for k, f in fields.items()
        }
    except StrataError:
        pass

    _write_text(args.output, render_json(out) + "\n")
    return 0


# --- region map ----------------------------------------------------------------

_AXIS_NAMES = ("Fx", "Fy", "h", "gamma")


def _region_row(task) -> list:
    """One CSV row block for a fixed outer-axis value (worker function)."""
    ax1_val, ax2_name, ax2_vals, fixed, ax1_name, tol = task
    rows = []
    for ax2_val in ax2_vals:
        point = dict(fixed)
        point[ax1_name] = ax1_val
        point[ax2_name] = ax2_val
        p = PhysParams(gamma=point["gamma"], g=1.0)
        cells = [_fmt(ax1_val), _fmt(ax2_val)]
        try:
            s = state_from_nondim(
                NondimState(point["Fx"], point["Fy"], point["h"]), p
            )
            rep = classify(s, p, tol=tol)
            sym = "true" if rep.symmetrizable else "false"
            fm = _fmt(rep.f_crit.f_minus) if rep.f_crit else "nan"
            fp = _fmt(rep.f_crit.f_plus) if rep.f_crit else "nan"
            minors = [_fmt(m) for m in rep.minors] if rep.minors else ["nan"] * 4
            cells += [rep.regime.value, sym, fm, fp] + minors
        except (DegenerateLayer, ValueError):
            cells += ["degenerate", "false", "nan", "nan"] + ["nan"] * 4
        rows.append(",".join(cells))
    return rows


def cmd_region_map(args) -> int:
    doc = _load_json(args.input)
    axes = doc.get("axes")
    _require(
        isinstance(axes, list) and len(axes) == 2, '"axes" must list two axis specs'
    )
    names = []
    grids = []
    for ax in axes:
        _require(
            isinstance(ax, dict) and {"name", "min", "max", "n"} <= set(ax),
            "each axis needs name, min, max, n",
        )
        _require(ax["name"] in _AXIS_NAMES, f"axis name must be one of {_AXIS_NAMES}")
        _require(int(ax["n"]) >= 2, "axis resolution must be >= 2")
        lo, hi = float(ax["min"]), float(ax["max"])
        _require(
            math.isfinite(lo) and math.isfinite(hi) and lo < hi,
            "axis range must be finite with min < max",
        )
        names.append(ax["name"])
        grids.append(np.linspace(lo, hi, int(ax["n"])))
    _require(names[0] != names[1], "the two axes must differ")

    fixed = {"Fx": 0.0, "Fy": 0.0, "h": 1.0, "gamma": 0.9}
    fixed.update(doc.get("fixed", {}))
    for n in names:
        fixed.pop(n, None)
    missing = set(_AXIS_NAMES) - set(names) - set(fixed)
    _require(not missing, f"fixed values required for {sorted(missing)}")

    tasks = [
        (float(v1), names[1], [float(v) for v in grids[1]], fixed, names[0], args.tol)
        for v1 in grids[0]
    ]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            blocks = list(pool.map(_region_row, tasks))
    else:
        blocks = [_region_row(t) for t in tasks]

    header = (
        f"# schema: {SCHEMA}\n"
        + ",".join(
            [names[0], names[1], "regime", "symmetrizable", "f_minus", "f_plus"]
            + [f"m{k}" for k in range(1, 5)]
        )
        + "\n"
    )
    _write_text(args.output, header + "\n".join(r for b in blocks for r in b) + "\n")
    return 0


# --- eigen ---------------------------------------------------------------------


def cmd_eigen(args) -> int:
    doc = _load_json(args.input)
    s, p, _ = parse_state_document(doc)
    try:
        if isinstance(s, AugmentedState):
            from .eigen import augmented_eigenvectors

            dec = augmented_eigenvectors(s, p, theta=args.theta, allow_fallback=True)
        else:
            dec = eigendecomposition(s, p, theta=args.theta)
    except NonRealSpectrum as e:
        raise RegimeGuardError(str(e)) from e

    out = {
        "schema": SCHEMA,
        "params": {"gamma": p.gamma, "g": p.g, "f": p.f},
        "state": _state_json(s),
        "theta": args.theta,
        "labels": list(dec.labels),
        "eigenvalues": [float(v) for v in dec.eigenvalues],
        "right": [list(map(float, dec.right[:, j])) for j in range(dec.right.shape[1])],
        "left": [list(map(float, dec.left[j, :])) for j in range(dec.left.shape[0])],
        "residual_right": list(map(float, dec.residual_right)),
        "residual_left": list(map(float, dec.residual_left)),
        "diagonalizable": dec.diagonalizable,
        "condition": dec.condition,
        "fallback_null_space": dec.fallback_null_space,
    }
    _write_text(args.output, render_json(out) + "\n")
    return 0


# --- expansions ------------------------------------------------------------------


def cmd_expansions(args) -> int:
    doc = _load_json(args.input)
    h = doc.get("h")
    gammas = doc.get("gammas")
    _require(isinstance(h, (int, float)) and h > 0, '"h" must be a positive number')
    _require(
        isinstance(gammas, list) and len(gammas) > 0, '"gammas" must be non-empty'
    )
    _require(
        all(isinstance(g, (int, float)) and 0 < g < 1 for g in gammas),
        "every gamma must lie in (0, 1)",
    )

    nd = NondimState(0.0, 0.0, float(h))
    lines = [
        f"# schema: {SCHEMA}",
        "kind,gamma,f_minus_oracle,f_minus_expansion,f_minus_abs_err,"
        "f_plus_oracle,f_plus_expansion,f_plus_abs_err",
    ]
    for gamma in gammas:
        fc = critical_froude(float(h), float(gamma))
        cells = ["data", _fmt(gamma), _fmt(fc.f_minus)]
        try:
            pm = expansions(nd, float(gamma), "f_crit_minus")
            cells += [_fmt(pm), _fmt(abs(fc.f_minus - pm))]
        except OutOfRegime:
            cells += ["nan", "nan"]
        cells.append(_fmt(fc.f_plus))
        try:
            pp = expansions(nd, float(gamma), "f_crit_plus")
            cells += [_fmt(pp), _fmt(abs(fc.f_plus - pp))]
        except OutOfRegime:
            cells += ["nan", "nan"]
        lines.append(",".join(cells))

    from .eigen import expansion_order_fit

    slope_minus = expansion_order_fit(float(h), "f_crit_minus")
    slope_plus = expansion_order_fit(float(h), "f_crit_plus")
    lines.append(f"slope,,,,{_fmt(slope_minus)},,,{_fmt(slope_plus)}")
    _write_text(args.output, "\n".join(lines) + "\n")
    return 0


# --- evolve --------------------------------------------------------------------


def _band_limited_field(n: int, m: int, seed: int) -> PeriodicField:
    """Seeded random perturbation with the top octave of modes zeroed."""
    rng = np.random.default_rng(seed)
    vals = rng.standard_normal((n, n, m))
    vhat = np.fft.fft2(vals, axes=(0, 1))
    k = np.abs(np.fft.fftfreq(n) * n)
    mask = (k[:, None] > n // 4) | (k[None, :] > n // 4)
    vhat[mask] = 0.0
    return PeriodicField(np.fft.ifft2(vhat, axes=(0, 1)).real)


def cmd_evolve(args) -> int:
    doc = _load_json(args.input)
    s, p, _ = parse_state_document(doc)
    base = s.base if isinstance(s, AugmentedState) else s
    report = classify(base, p, tol=args.tol)
    if report.regime in (Regime.GAP, Regime.BOUNDARY) and not args.allow_illposed:
        raise RegimeGuardError(
            f"background regime is {report.regime.value}; pass --allow-illposed "
            "to evolve anyway"
        )

    m = 8 if isinstance(s, AugmentedState) else 6
    init = _band_limited_field(args.grid_n, m, args.seed)
    c_t = well_posedness_bound(s, p, n_theta=args.theta_samples)
    growth = mode_growth(base, p, theta=0.0)

    times = np.linspace(0.0, args.time, args.n_times)
    norm0 = init.norm_l2()
    lines = [
        f"# schema: {SCHEMA}",
        f"# c_T: {_fmt(c_t) if math.isfinite(c_t) else 'inf'}",
        f"# growth_rate_theta0: {_fmt(growth.growth_rate)}",
        "t,norm_l2,norm_ratio",
    ]
    final = init
    for t in times:
        field = init if t == 0.0 else evolve_linear(s, p, init, float(t))
        nrm = field.norm_l2()
        lines.append(f"{_fmt(t)},{_fmt(nrm)},{_fmt(nrm / norm0)}")
        final = field
    _write_text(args.output, "\n".join(lines) + "\n")

    if args.field_output is not None:
        field_doc = {
            "schema": SCHEMA,
            "params": {"gamma": p.gamma, "g": p.g, "f": p.f},
            "state": _state_json(s),
            "time": args.time,
            "grid_n": final.n,
            "length": final.length,
            "values": [
                [list(map(float, final.values[i, j])) for j in range(final.n)]
                for i in range(final.n)
            ],
        }
        _write_text(args.field_output, render_json(field_doc) + "\n")
    return 0


# --- parser --------------------------------------------------------------------


def _add_io(sub, output_default="-"):
    sub.add_argument("--input", default="-", help="input JSON path or - for stdin")
    sub.add_argument(
        "--output", default=output_default, help="output path or - for stdout"
    )
    sub.add_argument("--tol", type=float, default=1e-9, help="relative tolerance")
    sub.add_argument(
        "--theta-samples",
        type=int,
        default=64,
        dest="theta_samples",
        help="directions sampled for all-theta checks",
    )
    sub.add_argument("--strict", action="store_true", help="refuse degenerate states")
    sub.add_argument(
        "--allow-illposed",
        action="store_true",
        dest="allow_illposed",
        help="permit evolution of gap-regime backgrounds",
    )
    sub.add_argument("--jobs", type=int, default=1, help="parallel worker processes")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="strata",
        description="Two-layer shallow-water hyperbolicity and eigenstructure tools",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p_an = subs.add_parser("analyze", help="classify a single state")
    _add_io(p_an)
    p_an.set_defaults(func=cmd_analyze)

    p_rm = subs.add_parser("region-map", help="scan a 2-axis parameter grid to CSV")
    _add_io(p_rm)
    p_rm.set_defaults(func=cmd_region_map)

    p_ei = subs.add_parser("eigen", help="dump the eigendecomposition at a state")
    _add_io(p_ei)
    p_ei.add_argument("--theta", type=float, default=0.0, help="direction (radians)")
    p_ei.set_defaults(func=cmd_eigen)

    p_ex = subs.add_parser("expansions", help="expansion-verification table")
    _add_io(p_ex)
    p_ex.set_defaults(func=cmd_expansions)

    p_ev = subs.add_parser("evolve", help="linearized periodic evolution run")
    _add_io(p_ev)
    p_ev.add_argument("--grid-n", type=int, default=64, dest="grid_n")
    p_ev.add_argument("--time", type=float, default=10.0, help="final time T")
    p_ev.add_argument("--n-times", type=int, default=11, dest="n_times")
    p_ev.add_argument("--seed", type=int, default=0)
    p_ev.add_argument(
        "--field-output", default=None, dest="field_output", help="final field JSON"
    )
    p_ev.set_defaults(func=cmd_evolve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliInputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except RegimeGuardError as e:
        print(f"refused: {e}", file=sys.stderr)
        return 3
    except BrokenPipeError:  # pragma: no cover
        return 0


if __name__ == "__main__":
    sys.exit(main())
