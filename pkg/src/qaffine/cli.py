"""Command-line front end.  Exit status: 0 success, 1 invalid input, 2 a
verification suite reported a failure."""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import channels, maps, rotations, serialize, state, verify
from .errors import QAffineError
from .su_basis import compute_structure_constants, generate_gellmann

EXIT_OK, EXIT_INVALID, EXIT_VERIFY = 0, 1, 2
DEFAULT_TOL = 1e-10


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def default_tol() -> float:
    raw = os.environ.get("QAFFINE_TOL")
    if raw is None:
        return DEFAULT_TOL
    try:
        return float(raw)
    except ValueError:
        raise UsageError(f"QAFFINE_TOL must be a number, got {raw!r}") from None


def _read(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _write(text: str, path: str | None):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _load(path: str, expect: tuple[str, ...]):
    obj = serialize.loads(_read(path))
    kind = type(obj).__name__
    if kind not in expect:
        raise UsageError(f"{path}: expected {' or '.join(expect)}, got {kind}")
    return obj


def _basis(d: int):
    g = generate_gellmann(d)
    return g, compute_structure_constants(g)


# --- commands ---------------------------------------------------------------


def cmd_gen_basis(args):
    g, st = _basis(args.dim)
    payload = {"generators": serialize.encode(g)}
    if args.tensors:
        payload["tensors"] = serialize.encode(st)
    _write(json.dumps(payload, indent=1) + "\n", args.out)


def cmd_to_bloch(args):
    rho = _load(args.input, ("DensityMatrix",))
    g, _ = _basis(rho.dim)
    _write(serialize.dumps(state.to_polarization(rho, g)), args.out)


def cmd_from_bloch(args):
    n = _load(args.input, ("PolarizationVector",))
    g, _ = _basis(n.dim)
    _write(serialize.dumps(state.from_polarization(n, g)), args.out)


def cmd_osr_from_dynmap(args):
    B = _load(args.input, ("DynamicalMapB",))
    _write(serialize.dumps(maps.osr_from_dynamical(B)), args.out)


def cmd_affine_from_osr(args):
    K = _load(args.input, ("KrausSet",))
    g, st = _basis(K.dim)
    _write(serialize.dumps(maps.affine_from_osr(K.with_expansion(g), st)), args.out)


def cmd_affine_from_dynmap(args):
    B = _load(args.input, ("DynamicalMapB",))
    g, _ = _basis(B.dim)
    _write(serialize.dumps(maps.affine_from_dynamical(B, g)), args.out)


def cmd_apply(args):
    M = _load(args.map, ("AffineMap", "KrausSet", "DynamicalMapB"))
    x = _load(args.input, ("PolarizationVector", "DensityMatrix"))
    if M.dim != x.dim:
        raise UsageError(f"dimension mismatch: map has d={M.dim}, state has d={x.dim}")
    g, st = _basis(M.dim)
    if isinstance(M, maps.AffineMap):
        n = x if isinstance(x, state.PolarizationVector) else state.to_polarization(x, g)
        out = maps.apply_affine(M, n)
        if isinstance(x, state.DensityMatrix):
            out = state.from_polarization(out, g)
    else:
        rho = x if isinstance(x, state.DensityMatrix) else state.from_polarization(x, g)
        out = maps.apply_osr(M, rho) if isinstance(M, maps.KrausSet) else maps.apply_dynamical(M, rho)
        if isinstance(x, state.PolarizationVector):
            out = state.to_polarization(out, g)
    _write(serialize.dumps(out), args.out)


def _parse_params(items) -> dict:
    params = {}
    for item in items or ():
        key, sep, val = item.partition("=")
        if not sep:
            raise UsageError(f"--param expects key=value, got {item!r}")
        try:
            params[key] = float(val)
        except ValueError:
            raise UsageError(f"--param {key}: {val!r} is not a number") from None
    return params


def cmd_channel(args):
    if args.spec:
        try:
            obj = json.loads(_read(args.spec))
            spec = channels.ChannelSpec(name=obj["name"], dim=int(obj.get("dim", 3)),
                                        params=dict(obj.get("params", {})), signs=obj.get("signs", "ones"))
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"{args.spec}: invalid channel spec ({exc})") from exc
    else:
        if not args.name:
            raise UsageError("channel: give --name or --spec")
        spec = channels.ChannelSpec(args.name, args.dim, _parse_params(args.param), args.signs)
    K = channels.build_channel(spec)
    if args.emit == "kraus":
        out = K
    elif args.emit == "dynmap":
        out = maps.dynamical_from_osr(K)
    else:
        _, st = _basis(K.dim)
        out = maps.affine_from_osr(K, st)
    _write(serialize.dumps(out), args.out)


def cmd_verify(args):
    suites = None if args.suite in (None, "all") else [args.suite]
    tol = args.tol if args.tol is not None else default_tol()
    results = verify.verify_all(args.dim, suites=suites, tol=tol, seed=args.seed)
    print(verify.format_table(results))
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_VERIFY if failed else EXIT_OK


NAMED_STATES = ("ket1", "ket2", "ket3", "mixed")


def _initial_state(spec: str, g) -> np.ndarray:
    if spec in NAMED_STATES:
        if spec == "mixed":
            return np.zeros(8)
        return state.basis_state(int(spec[-1]), g).n
    n = _load(spec, ("PolarizationVector",))
    if n.dim != 3:
        raise UsageError("scan requires a qutrit (d=3) initial vector")
    return n.n


def cmd_scan(args):
    g, st = _basis(3)
    n0 = _initial_state(args.initial, g)
    try:
        gen = rotations.named_generator(args.generator)
    except KeyError as exc:
        raise UsageError(str(exc)) from None
    thetas = np.linspace(0, 2 * np.pi, args.thetas)
    ps = np.linspace(0, 1, args.ps)
    grid = rotations.positivity_scan(n0, gen, thetas, ps, st=st)
    _write(grid.to_csv(), args.out)


def cmd_gram(args):
    basis = rotations.full_basis()
    G = rotations.gram_matrix(basis)
    lines = ["," + ",".join(g.label for g in basis)]
    for g, row in zip(basis, G):
        lines.append(g.label + "," + ",".join(f"{x:.17g}" for x in row))
    _write("\n".join(lines) + "\n", args.out)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qaffine", description=__doc__.split(".")[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, io=True):
        sp = sub.add_parser(name, help=help_)
        if io:
            sp.add_argument("--input", "-i", required=True, help="input JSON file ('-' for stdin)")
        sp.add_argument("--out", "-o", default=None, help="output file (default stdout)")
        sp.set_defaults(func=fn)
        return sp

    sp = add("gen-basis", cmd_gen_basis, "emit generalized Gell-Mann generators", io=False)
    sp.add_argument("--dim", type=int, required=True)
    sp.add_argument("--tensors", action="store_true", help="include f and d tensors")
    add("to-bloch", cmd_to_bloch, "density matrix -> polarization vector")
    add("from-bloch", cmd_from_bloch, "polarization vector -> density matrix")
    add("osr-from-dynmap", cmd_osr_from_dynmap, "spectral Kraus set of a dynamical matrix")
    add("affine-from-osr", cmd_affine_from_osr, "affine map of a Kraus set")
    add("affine-from-dynmap", cmd_affine_from_dynmap, "affine map of a dynamical matrix")
    sp = add("apply", cmd_apply, "apply a map to a state")
    sp.add_argument("--map", "-m", required=True, help="AffineMap, KrausSet or DynamicalMapB JSON")

    sp = add("channel", cmd_channel, "construct an example channel", io=False)
    sp.add_argument("--name", choices=sorted(channels.CHANNELS) + [k.replace("_", "-") for k in channels.CHANNELS])
    sp.add_argument("--dim", type=int, default=3)
    sp.add_argument("--param", action="append", help="channel parameter, e.g. x=0.4")
    sp.add_argument("--signs", choices=("ones", "alternating"), default="ones")
    sp.add_argument("--spec", help="ChannelSpec JSON file instead of --name/--param")
    sp.add_argument("--emit", choices=("affine", "kraus", "dynmap"), default="affine")

    sp = sub.add_parser("verify", help="run invariant suites")
    sp.add_argument("--suite", choices=list(verify.SUITES) + ["all"], default="all")
    sp.add_argument("--dim", type=int, action="append", default=None, help="repeatable")
    sp.add_argument("--tol", type=float, default=None)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_verify)

    sp = add("scan", cmd_scan, "S3 positivity scan over (theta, p)", io=False)
    sp.add_argument("--initial", default="ket2", help=f"one of {', '.join(NAMED_STATES)} or a vector JSON")
    sp.add_argument("--generator", default="f28", help="f1..f28 or mJK")
    sp.add_argument("--thetas", type=int, default=241)
    sp.add_argument("--ps", type=int, default=101)

    add("gram", cmd_gram, "Hilbert-Schmidt Gram matrix of f1..f28 as CSV", io=False)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify" and not args.dim:
        print("verify: at least one --dim is required", file=sys.stderr)
        return EXIT_INVALID
    try:
        status = args.func(args)
    except (UsageError, serialize.SchemaError, QAffineError, ValueError) as exc:
        print(f"qaffine {args.command}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK if status is None else status


if __name__ == "__main__":
    sys.exit(main())
