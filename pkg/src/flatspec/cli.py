"""Command line front end: ``flatspec <command> ...``.

Exit codes: 0 success (for ``compare``: isospectral and equivalent at the
cutoffs), 1 distinguished, 2 error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import bieberbach as bb
from . import characters, manifest
from . import orthogonal as od
from . import reconstruct as rc
from . import spectra
from .rational import format_rational, parse_rational

EXIT_OK, EXIT_DISTINGUISHED, EXIT_ERROR = 0, 1, 2


class UsageError(ValueError):
    pass


def parse_tau(text: str, n: int) -> od.OIrrep:
    """Parse "a1,a2,...;delta", e.g. "2;+1" or "1,1;0"."""
    try:
        weight, delta = text.split(";")
        coords = [int(x) for x in weight.split(",") if x.strip()]
        return od.irrep(n, coords, int(delta))
    except ValueError as exc:
        raise UsageError(f"bad representation {text!r} for O({n}): {exc}") from None


def _rational(text: str) -> Fraction:
    try:
        q = parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if q < 0:
        raise argparse.ArgumentTypeError("cutoff must be nonnegative")
    return q


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _write(text: str, path: str | None):
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _manifest(args) -> manifest.Manifest:
    return manifest.load(args.manifest) if args.manifest else manifest.builtin()


def _provenance(man: manifest.Manifest, **cutoffs) -> dict:
    out = {"manifest_sha256": man.sha256}
    for key, value in cutoffs.items():
        out[key] = format_rational(value) if isinstance(value, Fraction) else value
    return out


# -- commands -------------------------------------------------------------------

def cmd_catalog(args) -> int:
    for tau in od.catalog(args.n, args.weight_bound):
        print(f"{tau}\tdim {od.dim(tau)}")
    return EXIT_OK


def cmd_branch(args) -> int:
    tau = parse_tau(args.tau, args.n)
    embeddings = od.EMBEDDINGS if args.embedding == "both" else (args.embedding,)
    for emb in embeddings:
        for sigma in od.branch(tau, emb, args.convention):
            prefix = f"{emb}\t" if len(embeddings) > 1 else ""
            print(f"{prefix}{sigma}\tdim {od.dim(sigma)}")
    return EXIT_OK


def cmd_character(args) -> int:
    try:
        matrix = [[parse_rational(x) if isinstance(x, str) else x for x in row]
                  for row in json.loads(args.matrix)]
    except (json.JSONDecodeError, TypeError, ValueError) as exc:
        raise UsageError(f"bad matrix: {exc}") from None
    n = len(matrix)
    tau = parse_tau(args.tau, n)
    value = characters.character(tau, matrix)
    print(f"{value.real:.12g} {value.imag:+.12g}i")
    return EXIT_OK


def cmd_spectrum(args) -> int:
    man = _manifest(args)
    group = man.group(args.group)
    tau = parse_tau(args.tau, group.n)
    table = spectra.tau_spectrum_oracle(group, tau, args.nu_max, args.threads)
    prov = _provenance(man, group=args.group, nu_max=args.nu_max)
    if args.format == "csv":
        header = "".join(f"# {k}={v}\n" for k, v in prov.items()) + f"# tau={tau}\n"
        _write(header + table.to_csv(), args.output)
    else:
        _write(_dump({**prov, "spectrum": table.to_json()}), args.output)
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    man = _manifest(args)
    group = man.group(args.group)
    provider = rc.OracleProvider(group, args.threads)
    table = rc.reconstruct_multiplicities(provider, args.weight_bound, args.nu_max, args.convention)
    bad = rc.round_trip(provider, table)
    out = {
        **_provenance(man, group=args.group, weight_bound=args.weight_bound, nu_max=args.nu_max),
        "round_trip": {"ok": not bad, "failures": [str(t) for t in bad]},
        "multiplicities": table.to_json(),
    }
    _write(_dump(out), args.output)
    return EXIT_OK if not bad else EXIT_ERROR


def cmd_compare(args) -> int:
    man = _manifest(args)
    g1, g2 = man.group(args.first), man.group(args.second)
    report = rc.strong_isospectrality_report(g1, g2, args.weight_bound, args.nu_max, args.convention,
                                             args.threads)
    if args.format == "json":
        prov = _provenance(man, weight_bound=args.weight_bound, nu_max=args.nu_max)
        _write(_dump({**prov, "report": report.to_json()}), args.output)
    else:
        prov = _provenance(man)
        _write(f"manifest sha256 {prov['manifest_sha256']}\n" + report.to_text(), args.output)
    same = report.all_isospectral and report.equivalence.equivalent
    return EXIT_OK if same else EXIT_DISTINGUISHED


def cmd_search(args) -> int:
    desc = bb.FamilyDescriptor(n=args.n, max_holonomy=args.max_holonomy,
                               translation_denominator=args.denominator, cap=args.cap)
    result = rc.search_distinguishing_pairs(desc, args.weight_bound, args.nu_max, args.threads)
    out = {"family": {"n": desc.n, "max_holonomy": desc.max_holonomy,
                      "translation_denominator": desc.translation_denominator, "cap": desc.cap},
           "weight_bound": args.weight_bound, "nu_max": format_rational(args.nu_max),
           **result.to_json(),
           # definitions of every bucketed group, loadable with --manifest
           "manifest": manifest.to_json(result.groups)}
    _write(_dump(out), args.output)
    return EXIT_OK


def cmd_presets(args) -> int:
    groups = bb.presets()
    if args.format == "json":
        _write(_dump(manifest.to_json(groups)), args.output)
        return EXIT_OK
    for name, g in groups.items():
        kind = "orientable" if g.orientable else "non-orientable"
        print(f"{name}\tn={g.n}\t|F|={g.order}\t{kind}")
    return EXIT_OK


def cmd_run(args) -> int:
    """Run every job of a manifest; exit with the worst job status."""
    man = manifest.load(args.manifest)
    status = EXIT_OK
    for job in man.jobs:
        command = job.get("command")
        ns = argparse.Namespace(manifest=args.manifest, threads=args.threads, convention=args.convention,
                                output=None, format=job.get("format", "json"))
        if command == "spectrum":
            ns.group, ns.tau, ns.nu_max = job["group"], job["tau"], _rational(str(job["nu_max"]))
            code = cmd_spectrum(ns)
        elif command == "reconstruct":
            ns.group = job["group"]
            ns.weight_bound, ns.nu_max = int(job["weight_bound"]), _rational(str(job["nu_max"]))
            code = cmd_reconstruct(ns)
        elif command == "compare":
            ns.first, ns.second = job["first"], job["second"]
            ns.weight_bound, ns.nu_max = int(job["weight_bound"]), _rational(str(job["nu_max"]))
            code = cmd_compare(ns)
        else:
            raise UsageError(f"unknown job command {command!r}")
        status = max(status, code)
    return status


# -- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="flatspec", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, manifest_opt=True):
        sp.add_argument("--threads", type=int, default=1, help="worker threads for lattice kernels")
        sp.add_argument("--convention", choices=od.CONVENTIONS, default="A",
                        help="kappa sign convention for O(n-1) labels")
        sp.add_argument("--output", "-o", help="write to this file instead of stdout")
        if manifest_opt:
            sp.add_argument("--manifest", "-m", help="JSON manifest (default: built-in presets)")

    sp = sub.add_parser("catalog", help="irreducibles of O(n) up to a weight bound")
    sp.add_argument("n", type=int)
    sp.add_argument("--weight-bound", type=int, default=1)
    sp.set_defaults(func=cmd_catalog)

    sp = sub.add_parser("branch", help="restriction of an O(n) irreducible to O(n-1)")
    sp.add_argument("n", type=int)
    sp.add_argument("tau", help='weight and delta, e.g. "2;+1" or "1,1;0"')
    sp.add_argument("--embedding", choices=("both",) + od.EMBEDDINGS, default="both")
    sp.add_argument("--convention", choices=od.CONVENTIONS, default="A")
    sp.set_defaults(func=cmd_branch)

    sp = sub.add_parser("character", help="trace of an irreducible at an orthogonal matrix")
    sp.add_argument("tau")
    sp.add_argument("matrix", help='JSON rows, entries numbers or "p/q" strings')
    sp.set_defaults(func=cmd_character)

    sp = sub.add_parser("spectrum", help="tau-spectrum of a group from the manifest")
    sp.add_argument("group")
    sp.add_argument("tau")
    sp.add_argument("--nu-max", type=_rational, required=True)
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    common(sp)
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("reconstruct", help="regular-representation multiplicities from spectra")
    sp.add_argument("group")
    sp.add_argument("--weight-bound", type=int, required=True)
    sp.add_argument("--nu-max", type=_rational, required=True)
    common(sp)
    sp.set_defaults(func=cmd_reconstruct)

    sp = sub.add_parser("compare", help="strong isospectrality report for two groups")
    sp.add_argument("first")
    sp.add_argument("second")
    sp.add_argument("--weight-bound", type=int, required=True)
    sp.add_argument("--nu-max", type=_rational, required=True)
    sp.add_argument("--format", choices=("text", "json"), default="text")
    common(sp)
    sp.set_defaults(func=cmd_compare)

    sp = sub.add_parser("search", help="pairs in a diagonal family told apart only by higher bundles")
    sp.add_argument("--n", type=int, default=3)
    sp.add_argument("--max-holonomy", type=int, default=4)
    sp.add_argument("--denominator", type=int, default=2)
    sp.add_argument("--cap", type=int, default=20000)
    sp.add_argument("--weight-bound", type=int, default=2)
    sp.add_argument("--nu-max", type=_rational, default=Fraction(4))
    common(sp, manifest_opt=False)
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("presets", help="list the built-in groups")
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.add_argument("--output", "-o")
    sp.set_defaults(func=cmd_presets)

    sp = sub.add_parser("run", help="run the jobs listed in a manifest")
    sp.add_argument("manifest")
    sp.add_argument("--threads", type=int, default=1)
    sp.add_argument("--convention", choices=od.CONVENTIONS, default="A")
    sp.set_defaults(func=cmd_run)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "threads", 1) < 1:
        print("flatspec: --threads must be at least 1", file=sys.stderr)
        return EXIT_ERROR
    cache = os.environ.get("FLATSPEC_CACHE")
    try:
        if cache:
            characters.load_memo(cache)
        code = args.func(args)
        if cache:
            characters.save_memo(cache)
        return code
    except (UsageError, manifest.ManifestError, bb.InvalidGroupError, spectra.CutoffError,
            spectra.NonIntegralMultiplicityError, rc.ReconstructionError, rc.ProviderGapError,
            bb.FamilyTooLargeError, od.InvalidIrrepError, ValueError, OverflowError, OSError) as exc:
        print(f"flatspec: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
