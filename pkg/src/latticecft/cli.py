"""Command-line front end.

Every subcommand emits one canonical JSON report on stdout (or to
--output): {"format": 1, "command", "inputs_digest", "seed", "results"}.
Exit codes: 0 success, 1 a verified identity failed, 2 input error (with
a machine-readable {"error_kind", "detail"} report).  Reports are
byte-identical across runs for identical inputs and seed.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import acceptance, blocks, fock, heisenberg, lattices, theta
from .errors import LatticeCftError
from .lattices import discriminant_group, validate_even_lattice
from .surfaces import BlockLabel, Surface

DEFAULT_SEED = acceptance.DEFAULT_SEED

COMMANDS = ("disc", "blocks", "factorize", "modular", "verlinde", "theta",
            "fock", "heisenberg", "accept")


@dataclass(frozen=True)
class RunConfig:
    """One resolved invocation: command, inputs, tolerance overrides, seed
    and output destination."""

    command: str
    seed: int = DEFAULT_SEED
    output: str | None = None
    tolerance: float | None = None
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.tolerance is not None and self.tolerance < 0:
            raise ValueError("tolerance override must be nonnegative")

    def opt(self, name, default=None):
        return self.options.get(name, default)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _digest(inputs) -> str:
    return hashlib.sha256(canonical_json(inputs).encode()).hexdigest()[:16]


def _load_json_arg(value: str):
    """Inline JSON, or a path to a JSON file."""
    try:
        return json.loads(value)
    except json.JSONDecodeError:
        pass
    try:
        with open(value, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise _ParseError(f"{value!r} is neither inline JSON nor a readable "
                          f"file: {exc}") from exc


class _ParseError(Exception):
    pass


def _check_format(data):
    if isinstance(data, dict) and data.get("format", 1) != 1:
        raise _ParseError(f"unsupported format {data['format']!r}")


def _load_lattice(value: str):
    data = _load_json_arg(value)
    _check_format(data)
    gram = data["gram"] if isinstance(data, dict) else data
    lat = validate_even_lattice(gram)
    return lat, discriminant_group(lat), [list(map(int, row)) for row in gram]


def _load_surface(value: str) -> Surface:
    data = _load_json_arg(value)
    _check_format(data)
    return Surface.from_json(data)


def _load_labels(value: str | None, disc) -> BlockLabel:
    if value is None:
        return BlockLabel(())
    data = _load_json_arg(value)
    _check_format(data)
    out = {}
    for cid, coords in data.items():
        if cid == "format":
            continue
        if isinstance(coords, int):
            coords = [coords]
        out[str(cid)] = disc.element(tuple(int(c) for c in coords))
    return BlockLabel.from_dict(out)


def _as_fraction(x) -> Fraction:
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, int):
        return Fraction(x)
    return Fraction(x).limit_denominator(10 ** 6)


def _parse_char(value: str, g: int):
    try:
        pair = json.loads(f"[{value}]")
    except json.JSONDecodeError as exc:
        raise _ParseError(f"cannot parse characteristic {value!r}") from exc
    if len(pair) != 2:
        raise _ParseError("characteristic must be 'a,b'")
    out = []
    for part in pair:
        if not isinstance(part, list):
            part = [part] * g
        out.append(tuple(_as_fraction(x) for x in part))
    return out[0], out[1]


def _parse_complex_array(data):
    if isinstance(data, (int, float)):
        return np.array(float(data), dtype=complex)
    if isinstance(data, dict):
        re = np.asarray(data.get("re", 0.0), dtype=float)
        im = np.asarray(data.get("im", 0.0), dtype=float)
        return re + 1j * im
    return np.asarray(data, dtype=complex)


# ---------------------------------------------------------------------------
# command handlers: each returns (inputs, results, verified_or_None)


def _cmd_disc(config: RunConfig):
    lat, disc, gram = _load_lattice(config.opt("lattice"))
    g = lattices.gauss_sum(disc)
    results = {
        "invariant_factors": list(disc.invariant_factors),
        "order": disc.order,
        "rank": lat.rank,
        "det": lat.det,
        "level_ell": lat.level_ell,
        "bilinear_mod1": [[str(v) for v in row] for row in disc.bilinear_matrix],
        "quadratic_mod2": [str(v) for v in disc.quadratic_diag],
        "gauss_sum_re": g.real,
        "gauss_sum_im": g.imag,
        "signature_mod8": lattices.signature_mod8(disc),
    }
    return {"gram": gram}, results, None


def _cmd_blocks(config: RunConfig):
    lat, disc, gram = _load_lattice(config.opt("lattice"))
    s = _load_surface(config.opt("surface"))
    labels = _load_labels(config.opt("labels"), disc)
    dim = blocks.block_dimension(s, labels, disc)
    inputs = {"gram": gram, "surface": s.to_json(),
              "labels": {cid: list(e.coords) for cid, e in labels.items()}}
    return inputs, {"dimension": dim}, None


def _cmd_factorize(config: RunConfig):
    lat, disc, gram = _load_lattice(config.opt("lattice"))
    s = _load_surface(config.opt("surface"))
    pieces_data = _load_json_arg(config.opt("pieces"))
    pieces = tuple(Surface.from_json(p) for p in pieces_data)
    matching = [(str(a), str(b)) for a, b in _load_json_arg(config.opt("matching"))]
    labels = _load_labels(config.opt("labels"), disc)
    rep = blocks.verify_factorization(s, pieces, matching, labels, disc,
                                      keep_terms=config.opt("terms", False))
    results = {"lhs": rep.lhs, "rhs": rep.rhs, "equal": rep.equal}
    if rep.terms is not None:
        results["terms"] = [{"assignment": [list(c) for c in assign],
                             "value": value} for assign, value in rep.terms]
    inputs = {"gram": gram, "surface": s.to_json(),
              "pieces": [p.to_json() for p in pieces], "matching": matching,
              "labels": {cid: list(e.coords) for cid, e in labels.items()}}
    return inputs, results, rep.equal


def _cmd_modular(config: RunConfig):
    lat, disc, gram = _load_lattice(config.opt("lattice"))
    rep = blocks.genus1_mcg_rep(disc)
    md = blocks.modular_data(lat, disc)
    results = {
        "labels": [list(a.coords) for a in disc.elements()],
        "S_re": rep.S.real.tolist(),
        "S_im": rep.S.imag.tolist(),
        "T_diag_re": np.diag(rep.T).real.tolist(),
        "T_diag_im": np.diag(rep.T).imag.tolist(),
        "signature_mod8": rep.signature,
        "central_charge_exponent": str(md.central_charge_exponent),
        "s4_deviation": rep.s4_deviation,
        "st3_deviation": rep.st3_deviation,
        "charge_conjugation_deviation": rep.s2_is_charge_conjugation,
        "unitarity_deviation": rep.unitarity_deviation,
        "ok": rep.ok,
    }
    return {"gram": gram}, results, rep.ok


def _cmd_verlinde(config: RunConfig):
    lat, disc, gram = _load_lattice(config.opt("lattice"))
    s = _load_surface(config.opt("surface"))
    labels = _load_labels(config.opt("labels"), disc)
    try:
        rep = blocks.verlinde_check(s, labels, disc)
    except ArithmeticError as exc:
        inputs = {"gram": gram, "surface": s.to_json()}
        return inputs, {"equal": False, "detail": str(exc)}, False
    results = {"verlinde_re": rep.verlinde_raw.real,
               "verlinde_im": rep.verlinde_raw.imag,
               "rounded": rep.rounded, "block_dimension": rep.block_dim,
               "deviation": rep.deviation, "equal": rep.equal}
    inputs = {"gram": gram, "surface": s.to_json(),
              "labels": {cid: list(e.coords) for cid, e in labels.items()}}
    return inputs, results, rep.equal


def _cmd_theta(config: RunConfig):
    tau = theta.SiegelPoint.make(np.atleast_2d(_parse_complex_array(
        _load_json_arg(config.opt("tau")))))
    z = np.atleast_1d(_parse_complex_array(_load_json_arg(config.opt("z"))))
    a, b = _parse_char(config.opt("char"), tau.g)
    spec = theta.ThetaSpec.make(a, b)
    tol = config.opt("tol", 1e-10)
    val = theta.theta(spec, z, tau, tol=tol)
    inputs = {"tau_re": tau.tau.real.tolist(), "tau_im": tau.tau.imag.tolist(),
              "z_re": z.real.tolist(), "z_im": z.imag.tolist(),
              "a": [str(x) for x in a], "b": [str(x) for x in b],
              "tol": tol}
    results = {"value_re": val.value.real, "value_im": val.value.imag,
               "tail_bound": val.tail_bound, "R": val.radius}
    return inputs, results, None


def _cmd_fock(config: RunConfig):
    if config.opt("action") != "character":
        raise _UsageError(f"unknown fock action {config.opt('action')!r}")
    lat, disc, gram = _load_lattice(config.opt("lattice"))
    coords = [int(c) for c in str(config.opt("phi")).split(",")]
    k = len(disc.invariant_factors)
    if coords == [0] and k != 1:
        coords = [0] * k
    phi = disc.element(tuple(coords))
    max_energy = config.opt("max_energy", 10)
    ch = fock.sector_character(lat, disc, phi, max_energy)
    inputs = {"gram": gram, "phi": list(phi.coords),
              "max_energy": max_energy}
    results = {"ground_energy": str(ch.ground_energy),
               "coefficients": list(ch.coefficients),
               "lift": [str(x) for x in ch.lift]}
    return inputs, results, None


def _cmd_heisenberg(config: RunConfig):
    lat, disc, gram = _load_lattice(config.opt("lattice"))
    genus = config.opt("genus", 1)
    chi = config.opt("chi", 1)
    rep = heisenberg.schroedinger_irrep(disc, genus, chi=chi)
    inputs = {"gram": gram, "genus": genus, "chi": chi}
    return inputs, rep.to_json(), None


def _cmd_accept(config: RunConfig):
    defects = frozenset(config.opt("defect") or [])
    results = acceptance.run_all(seed=config.seed, tolerance=config.tolerance,
                                 defects=defects, threads=config.opt("threads"))
    rows = []
    all_ok = True
    for r in results:
        # wall times go to stderr only: reports must be byte-reproducible
        rows.append(_jsonable({"id": r.cid, "name": r.name,
                               "passed": bool(r.passed),
                               "details": r.details}))
        all_ok = all_ok and bool(r.passed)
        print(f"criterion {r.cid:02d} [{'PASS' if r.passed else 'FAIL'}] "
              f"{r.name} ({r.seconds:.2f}s)", file=sys.stderr)
    inputs = {"tolerance": config.tolerance, "defects": sorted(defects)}
    return inputs, {"criteria": rows, "all_passed": all_ok}, all_ok


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


HANDLERS = {
    "disc": _cmd_disc,
    "blocks": _cmd_blocks,
    "factorize": _cmd_factorize,
    "modular": _cmd_modular,
    "verlinde": _cmd_verlinde,
    "theta": _cmd_theta,
    "fock": _cmd_fock,
    "heisenberg": _cmd_heisenberg,
    "accept": _cmd_accept,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--output", default=None,
                        help="write the JSON report to this path")

    parser = _Parser(prog="latticecft",
                     description="Abelian lattice CFT computations")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("disc", parents=[common],
                       help="discriminant group of an even lattice")
    p.add_argument("--lattice", required=True)

    p = sub.add_parser("blocks", parents=[common],
                       help="conformal-block dimension")
    p.add_argument("--surface", required=True)
    p.add_argument("--lattice", default="[[2]]")
    p.add_argument("--labels", default=None)

    p = sub.add_parser("factorize", parents=[common],
                       help="verify the factorization identity")
    p.add_argument("--surface", required=True)
    p.add_argument("--pieces", required=True)
    p.add_argument("--matching", required=True)
    p.add_argument("--lattice", default="[[2]]")
    p.add_argument("--labels", default=None)
    p.add_argument("--terms", action="store_true")

    p = sub.add_parser("modular", parents=[common],
                       help="S/T matrices and their relations")
    p.add_argument("--lattice", required=True)

    p = sub.add_parser("verlinde", parents=[common],
                       help="Verlinde sum vs block dimension")
    p.add_argument("--surface", required=True)
    p.add_argument("--lattice", default="[[2]]")
    p.add_argument("--labels", default=None)

    p = sub.add_parser("theta", parents=[common],
                       help="numerical theta function")
    p.add_argument("--tau", required=True)
    p.add_argument("--z", required=True)
    p.add_argument("--char", default="0,0")
    p.add_argument("--tol", type=float, default=1e-10)

    p = sub.add_parser("fock", parents=[common],
                       help="truncated loop-group characters")
    p.add_argument("action", choices=["character"])
    p.add_argument("--lattice", required=True)
    p.add_argument("--phi", default="0")
    p.add_argument("--max-energy", type=int, default=10)

    p = sub.add_parser("heisenberg", parents=[common],
                       help="export a Schroedinger irrep")
    p.add_argument("--lattice", required=True)
    p.add_argument("--genus", type=int, default=1)
    p.add_argument("--chi", type=int, default=1)

    p = sub.add_parser("accept", parents=[common],
                       help="run the acceptance suite")
    p.add_argument("--tolerance", type=float, default=None)
    p.add_argument("--defect", action="append", choices=["s_sign_flip"],
                   help=argparse.SUPPRESS)
    p.add_argument("--threads", type=int, default=None)
    return parser


def run(argv) -> tuple[int, bytes, str | None]:
    parser = build_parser()
    command = "?"
    output = None
    try:
        args = parser.parse_args(argv)
        command = args.command
        output = args.output
        options = {k: v for k, v in vars(args).items()
                   if k not in ("command", "seed", "output", "tolerance")}
        config = RunConfig(command=command, seed=args.seed, output=args.output,
                           tolerance=getattr(args, "tolerance", None),
                           options=options)
        inputs, results, verified = HANDLERS[command](config)
        report = {"format": 1, "command": command,
                  "inputs_digest": _digest(_jsonable(inputs)),
                  "seed": config.seed, "results": _jsonable(results)}
        code = 0 if verified in (None, True) else 1
        return code, (canonical_json(report) + "\n").encode(), output
    except (_UsageError, _ParseError, json.JSONDecodeError, KeyError,
            TypeError) as exc:
        report = {"format": 1, "command": command, "error_kind": "parse",
                  "detail": str(exc)}
        return 2, (canonical_json(report) + "\n").encode(), output
    except LatticeCftError as exc:
        report = {"format": 1, "command": command,
                  "error_kind": type(exc).__name__, "detail": str(exc)}
        return 2, (canonical_json(report) + "\n").encode(), output
    except ValueError as exc:
        report = {"format": 1, "command": command, "error_kind": "validation",
                  "detail": str(exc)}
        return 2, (canonical_json(report) + "\n").encode(), output


def render_report(argv) -> bytes:
    """The report bytes a run would print; used by the determinism check."""
    return run(argv)[1]


def main() -> None:
    code, payload, output = run(sys.argv[1:])
    if output:
        with open(output, "wb") as fh:
            fh.write(payload)
    else:
        sys.stdout.buffer.write(payload)
    sys.exit(code)


if __name__ == "__main__":
    main()
