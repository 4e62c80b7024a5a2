"""Command-line front end.

Every run prints one JSON object: the result fields at top level, plus
``warnings`` and a ``report`` block (command echo, input digests, timing).
Exit codes: 0 success, 1 malformed input, 2 verification failure, 64 usage.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import shutil
import sys
import time
from pathlib import Path

from . import cech, holonomy
from .errors import NotFlatError, RelatorViolationError, StatesumError
from .groups import abelian_group_from_spec, group_from_spec
from .holonomy import AbelianHom, EdgeLabeling
from .homology import homology
from .invariants import GroupHom, default_workers, dw_invariant, yetter_invariant
from .presentation import abelianization, check_simply_connected, present_pi1, simplify_presentation
from .simplicial import (
    FIXTURE_DIR,
    EdgePath,
    TwoCycle,
    fixture_names,
    load_complex,
    load_fixture,
    parse_simplex_key,
)

EXIT_OK, EXIT_MALFORMED, EXIT_VERIFY, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class VerificationFailed(Exception):
    """Carries a payload to print before exiting with status 2."""

    def __init__(self, payload: dict):
        super().__init__("verification failed")
        self.payload = payload


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _digest(path: str) -> str | None:
    p = Path(path)
    if not p.exists():
        # same fallback as load_complex
        p = FIXTURE_DIR / f"{p.stem}.json"
    if p.exists():
        return hashlib.sha256(p.read_bytes()).hexdigest()
    return None


def _read_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise StatesumError(f"file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise StatesumError(f"{path}: invalid JSON ({exc})") from None


def _complex(path: str):
    try:
        return load_complex(path)
    except FileNotFoundError as exc:
        raise StatesumError(str(exc)) from None
    except json.JSONDecodeError as exc:
        raise StatesumError(f"{path}: invalid JSON ({exc})") from None


def _json_list(text: str, what: str) -> list:
    try:
        value = json.loads(text)
    except json.JSONDecodeError:
        # bare comma separated ints, e.g. "1,2,3"
        try:
            return [int(x) for x in text.split(",") if x.strip()]
        except ValueError:
            raise StatesumError(f"{what} must be a JSON array") from None
    if not isinstance(value, list):
        raise StatesumError(f"{what} must be a JSON array")
    return value


def _simplices(violations) -> list[list[int]]:
    return [list(s) for s in violations]


# ------------------------------------------------------------------ commands


def cmd_dw(args):
    K = _complex(args.complex)
    G = group_from_spec(args.group)
    workers = args.threads if args.threads is not None else default_workers()
    return {"invariant": dw_invariant(K, G, args.basepoint, workers=workers)}, []


def cmd_yetter(args):
    K = _complex(args.complex)
    H = abelian_group_from_spec(args.group)
    res = yetter_invariant(K, H)
    return {"invariant": res.invariant, "verified_simply_connected": res.verified_simply_connected}, res.warnings


def cmd_pi1(args):
    K = _complex(args.complex)
    P = present_pi1(K, args.basepoint)
    raw_generators = P.generator_count
    if args.simplify:
        P = simplify_presentation(P, args.simplify)
    out = P.to_json()
    out.update(
        {
            "generator_edges": [list(e) for e in P.generator_edges],
            "abelianization": str(abelianization(P)),
            "raw_generators": raw_generators,
        }
    )
    warnings = []
    sc = check_simply_connected(K)
    out["verified_simply_connected"] = sc.verified
    if not sc.verified and not abelianization(P).ngens:
        warnings.append(sc.reason)
    return out, warnings


def cmd_homology(args):
    K = _complex(args.complex)
    degrees = [args.dim] if args.dim is not None else range(K.dimension + 1)
    groups = []
    for d in degrees:
        H = homology(K, d)
        groups.append({"degree": d, "rank": H.rank, "torsion": list(H.factors), "group": str(H)})
    return {"homology": groups, "f_vector": list(K.f_vector)}, []


def _load_cocycle(path):
    return cech.cocycle_from_json(_read_json(path))


def cmd_cech_verify(args):
    c = _load_cocycle(args.cocycle)
    verdict = (
        cech.verify_bundle_cocycle(c) if isinstance(c, cech.BundleCocycle) else cech.verify_gerbe_cocycle(c)
    )
    payload = {"kind": "bundle" if isinstance(c, cech.BundleCocycle) else "gerbe", "ok": verdict.ok,
               "violations": _simplices(verdict.violations)}
    if not verdict.ok:
        raise VerificationFailed(payload)
    return payload, []


def cmd_cech_class(args):
    c = _load_cocycle(args.cocycle)
    verdict = (
        cech.verify_bundle_cocycle(c) if isinstance(c, cech.BundleCocycle) else cech.verify_gerbe_cocycle(c)
    )
    if not verdict.ok:
        raise VerificationFailed({"ok": False, "violations": _simplices(verdict.violations)})
    cls = (
        cech.characteristic_class_bundle(c)
        if isinstance(c, cech.BundleCocycle)
        else cech.characteristic_class(c)
    )
    return {
        "degree": cls.degree,
        "group": str(cls.group),
        "coordinates": list(cls.coordinates),
        "is_zero": cls.is_zero,
        "representative": list(cls.representative),
    }, []


def cmd_gauge(args):
    c = _load_cocycle(args.cocycle)
    g = cech.gauge_from_json(_read_json(args.gauge), c.group)
    return cech.cocycle_to_json(cech.apply_gauge(c, g)), []


def _load_labeling(path):
    return holonomy.labeling_from_json(_read_json(path))


def cmd_holonomy(args):
    A = _load_labeling(args.labeling)
    if not isinstance(A, EdgeLabeling):
        raise StatesumError("holonomy needs a 'connection' labeling; use gerbe-holonomy for gerbes")
    if args.loop:
        p = EdgePath.from_vertices([int(x) for x in args.loop.split(",")])
        return {"holonomy": A.group.dump(holonomy.loop_holonomy(A, p))}, []
    verdict = holonomy.is_flat(A)
    if not verdict:
        raise VerificationFailed({"flat": False, "violations": _simplices(verdict.violations)})
    phi = holonomy.holonomy_hom(A, args.basepoint)
    P = present_pi1(A.complex, args.basepoint)
    return {
        "basepoint": P.basepoint,
        "images": list(phi.images),
        "generator_edges": [list(e) for e in P.generator_edges],
    }, []


def cmd_flat_check(args):
    L = _load_labeling(args.labeling)
    if isinstance(L, EdgeLabeling):
        verdict, kind = holonomy.is_flat(L), "connection"
    else:
        verdict, kind = holonomy.is_gerbe_flat(L), "gerbe-connection"
    payload = {"kind": kind, "flat": verdict.ok, "violations": _simplices(verdict.violations)}
    if not verdict.ok:
        raise VerificationFailed(payload)
    return payload, []


def cmd_reconstruct(args):
    K = _complex(args.complex)
    G = group_from_spec(args.group)
    images = tuple(G.parse(x) for x in _json_list(args.images, "--images"))
    A = holonomy.hom_to_connection(K, G, GroupHom(images), args.basepoint)
    return holonomy.labeling_to_json(A), []


def _parse_cycle(text: str) -> TwoCycle:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError:
        raw = _read_json(text)
    if not isinstance(raw, dict):
        raise StatesumError('--cycle must be a JSON object like {"0,1,2": 1}')
    return TwoCycle({parse_simplex_key(k): int(v) for k, v in raw.items()})


def cmd_gerbe_holonomy(args):
    B = _load_labeling(args.labeling)
    if isinstance(B, EdgeLabeling):
        raise StatesumError("gerbe-holonomy needs a 'gerbe-connection' labeling")
    if args.cycle:
        z = _parse_cycle(args.cycle)
        return {"holonomy": B.group.dump(holonomy.two_cycle_holonomy(B, z))}, []
    verdict = holonomy.is_gerbe_flat(B)
    if not verdict:
        raise VerificationFailed({"flat": False, "violations": _simplices(verdict.violations)})
    out = holonomy.abelian_hom_to_json(holonomy.gerbe_holonomy_hom(B))
    out["cycles"] = [
        {",".join(map(str, t)): c for t, c in z.coefficients.items()} for z in holonomy.h2_generators(B.complex)
    ]
    return out, []


def cmd_gerbe_reconstruct(args):
    K = _complex(args.complex)
    target = abelian_group_from_spec(args.group)
    h2 = homology(K, 2) if K.dimension >= 2 else None
    if h2 is None:
        raise StatesumError("complex has no triangles")
    images = tuple(target.parse(x) for x in _json_list(args.images, "--images"))
    psi = AbelianHom(h2, target, images)
    warnings = []
    if not check_simply_connected(K):
        warnings.append("pi_1 not verified trivial: labeling realises a hom on H_2, not on pi_2")
    return holonomy.labeling_to_json(holonomy.hom_to_gerbe_connection(K, psi)), warnings


def cmd_fixtures(args):
    out = []
    for name in fixture_names():
        K = load_fixture(name)
        out.append({"name": name, "f_vector": list(K.f_vector), "path": f"fixtures/{name}.json"})
    if args.write:
        dest = Path(args.write)
        dest.mkdir(parents=True, exist_ok=True)
        for name in fixture_names():
            shutil.copyfile(FIXTURE_DIR / f"{name}.json", dest / f"{name}.json")
    return {"fixtures": out}, []


COMMANDS = {
    "dw": cmd_dw,
    "yetter": cmd_yetter,
    "pi1": cmd_pi1,
    "homology": cmd_homology,
    "cech-verify": cmd_cech_verify,
    "cech-class": cmd_cech_class,
    "gauge": cmd_gauge,
    "holonomy": cmd_holonomy,
    "flat-check": cmd_flat_check,
    "reconstruct": cmd_reconstruct,
    "gerbe-holonomy": cmd_gerbe_holonomy,
    "gerbe-reconstruct": cmd_gerbe_reconstruct,
    "fixtures": cmd_fixtures,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--compact", action="store_true", help="single-line JSON output")

    parser = _Parser(prog="statesum", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_):
        return sub.add_parser(name, help=help_, parents=[common])

    p = add("dw", "#Hom(pi_1(K), G)")
    p.add_argument("--complex", required=True)
    p.add_argument("--group", required=True)
    p.add_argument("--basepoint", type=int)
    p.add_argument("--threads", type=int, help="worker processes (default: STATESUM_THREADS)")

    p = add("yetter", "#Hom(H_2(K), H), equal to #Hom(pi_2, H) when simply connected")
    p.add_argument("--complex", required=True)
    p.add_argument("--group", required=True)

    p = add("pi1", "edge-path presentation of pi_1")
    p.add_argument("--complex", required=True)
    p.add_argument("--basepoint", type=int)
    p.add_argument("--simplify", type=int, default=0, metavar="EFFORT")

    p = add("homology", "integral homology groups")
    p.add_argument("--complex", required=True)
    p.add_argument("--dim", type=int)

    p = add("cech-verify", "check the cocycle condition")
    p.add_argument("--cocycle", required=True)

    p = add("cech-class", "integral characteristic class of a Q/Z cocycle")
    p.add_argument("--cocycle", required=True)

    p = add("gauge", "apply a gauge transformation to a cocycle")
    p.add_argument("--cocycle", required=True)
    p.add_argument("--gauge", required=True)

    p = add("holonomy", "loop holonomy, or the holonomy hom when no loop is given")
    p.add_argument("--labeling", required=True)
    p.add_argument("--loop", help="comma separated vertex loop, e.g. 0,1,2,0")
    p.add_argument("--basepoint", type=int)

    p = add("flat-check", "flatness of a connection or gerbe-connection")
    p.add_argument("--labeling", required=True)

    p = add("reconstruct", "flat connection from generator images")
    p.add_argument("--complex", required=True)
    p.add_argument("--group", required=True)
    p.add_argument("--images", required=True, help="JSON array or comma separated element indices")
    p.add_argument("--basepoint", type=int)

    p = add("gerbe-holonomy", "2-cycle holonomy, or the hom on H_2 when no cycle is given")
    p.add_argument("--labeling", required=True)
    p.add_argument("--cycle", help='JSON object {"i,j,k": coeff} or a file holding one')

    p = add("gerbe-reconstruct", "flat gerbe-connection from images of the H_2 generators")
    p.add_argument("--complex", required=True)
    p.add_argument("--group", required=True, help="qmodz, cyclic:n or abelian:d1,...")
    p.add_argument("--images", required=True, help='JSON array, e.g. ["1/3"] or [5]')

    p = add("fixtures", "list (and optionally copy out) the shipped complexes")
    p.add_argument("--write", metavar="DIR")
    return parser


def run(argv: list[str] | None = None) -> tuple[dict | None, int, str]:
    """Execute one command; returns ``(report, exit code, error text)``."""
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        return None, EXIT_USAGE, str(exc)
    start = time.perf_counter()
    warnings: list[str] = []
    code = EXIT_OK
    try:
        payload, warnings = COMMANDS[args.command](args)
    except VerificationFailed as exc:
        payload, code = exc.payload, EXIT_VERIFY
    except (RelatorViolationError, NotFlatError) as exc:
        payload, code = {"error": str(exc)}, EXIT_VERIFY
    except (StatesumError, ValueError, KeyError, OSError) as exc:
        return None, EXIT_MALFORMED, f"statesum: error: {exc}"
    inputs = {}
    for key in ("complex", "cocycle", "gauge", "labeling"):
        path = getattr(args, key, None)
        if path:
            inputs[path] = _digest(path)
    report = dict(payload)
    report["warnings"] = list(warnings)
    report["report"] = {
        "command": argv,
        "inputs": inputs,
        "elapsed_seconds": round(time.perf_counter() - start, 6),
    }
    return report, code, ""


def main(argv: list[str] | None = None) -> int:
    report, code, error = run(argv)
    if report is None:
        print(error, file=sys.stderr)
        return code
    compact = "--compact" in (sys.argv[1:] if argv is None else argv)
    print(json.dumps(report, separators=(",", ":")) if compact else json.dumps(report, indent=2))
    return code


if __name__ == "__main__":
    sys.exit(main())
