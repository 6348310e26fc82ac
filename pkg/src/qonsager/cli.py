"""Command-line front end: ``qons verify <suite> ...``.

Exit status: 0 all Verified, 1 any Failed, 2 Inconclusive without Failed,
64 configuration error, 70 resource budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import platform
import re
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import __version__
from .certificates import Verdict, VerificationCertificate, weakest
from .config import SUITES, SuiteConfig, load
from .errors import ConfigError, PoleAtPoint, ResourceBudgetExceeded
from .rewrite import BUNDLED, Certify

EXIT = {Verdict.VERIFIED: 0, Verdict.FAILED: 1, Verdict.INCONCLUSIVE: 2}
EXIT_CONFIG = 64
EXIT_BUDGET = 70


# -- suites --------------------------------------------------------------------
# Each suite returns a list of (file stem, thunk producing a certificate).


def _bind(cfg: SuiteConfig):
    return dict(cfg.bindings)


def _spec(x, cfg):
    return x.specialize(cfg.bindings) if cfg.bindings else x


def _modules(cfg: SuiteConfig):
    from .uqsl2 import chain_module, evaluation_module

    mods = [(f"spin{n}", lambda n=n: evaluation_module(n, cfg.spectral)) for n in cfg.module_spins]
    if cfg.tensor_depth >= 2:
        mods.append((f"chain{cfg.tensor_depth}", lambda: chain_module(cfg.tensor_depth)))
    return mods


def _qoa_params(cfg):
    from .coideal import QOAParams

    return QOAParams.from_bindings(cfg.bindings)


def suite_classical_onsager(cfg: SuiteConfig):
    from .onsager import check_dolan_grady, check_second_presentation, classical_onsager_module, loop_A, loop_family

    def module_dg(n):
        m = classical_onsager_module(n, cfg.spectral)
        A0, A1 = _spec(m["A0"], cfg), _spec(m["A1"], cfg)
        cert = check_dolan_grady(A0, A1, bindings=_bind(cfg))
        cert.metadata["module"] = m.label
        return cert

    tasks = [
        ("dolan-grady-loop", lambda: check_dolan_grady(loop_A(0), loop_A(1))),
        (
            f"second-presentation-window{cfg.window}",
            lambda: check_second_presentation(loop_family(cfg.window), cfg.window),
        ),
    ]
    tasks += [(f"dolan-grady-spin{n}", lambda n=n: module_dg(n)) for n in cfg.module_spins]
    return tasks


def suite_qdg_coideal(cfg: SuiteConfig):
    from .coideal import qoa_image
    from .onsager import check_qdg

    def run(build):
        m = build()
        pair = qoa_image(_qoa_params(cfg))
        rho = cfg.rho_scalar() if cfg.rho is not None else pair.rho
        W0, W1 = (m.represent(x) for x in (pair.W0, pair.W1))
        return check_qdg(W0, W1, rho, metadata={"module": m.label}, point=_bind(cfg))

    return [(f"q-dolan-grady-{tag}", lambda b=build: run(b)) for tag, build in _modules(cfg)]


def suite_augmented_coideal(cfg: SuiteConfig):
    from .coideal import augmented_image
    from .onsager import check_augmented

    def run(build):
        m = build()
        quad = augmented_image(_qoa_params(cfg))
        mats = [m.represent(x) for x in quad.as_tuple()]
        return check_augmented(*mats, metadata={"module": m.label}, point=_bind(cfg))

    return [(f"augmented-q-onsager-{tag}", lambda b=build: run(b)) for tag, build in _modules(cfg)]


def suite_affine_presentation(cfg: SuiteConfig):
    def run(build):
        m = build()
        res = [(lab, _spec(r, cfg)) for lab, r in m.relation_residuals()]
        return VerificationCertificate.from_residuals(
            "affine-presentation", res, "matrix", _bind(cfg), {"module": m.label}
        )

    return [(f"affine-presentation-{tag}", lambda b=build: run(b)) for tag, build in _modules(cfg)]


def suite_davies_kernel(cfg: SuiteConfig):
    from .coideal import qoa_image
    from .davies import MAX_WORDS, evaluate_on_pair, expected_word_count, kernel_basis
    from .uqsl2 import evaluation_module

    # fail before any elimination rather than after the lower degrees
    if expected_word_count(cfg.degree) > MAX_WORDS:
        raise ResourceBudgetExceeded(
            f"degree {cfg.degree} needs {expected_word_count(cfg.degree)} words (cap {MAX_WORDS})"
        )

    def run(n, D):
        m = evaluation_module(n, cfg.spectral)
        pair = qoa_image(_qoa_params(cfg))
        W0, W1 = (_spec(m.represent(x), cfg) for x in (pair.W0, pair.W1))
        rep = kernel_basis(None, (W0, W1), D, seed=cfg.seed, points=cfg.points)
        fallback = isinstance(rep.specialization, dict) and "fallback" in rep.specialization
        if fallback:
            # the kernel was computed at sample points; re-check there
            pt = rep.specialization["fallback"][rep.dimensions_at_points.index(rep.kernel_dimension)]
            W0, W1 = W0.specialize(pt), W1.specialize(pt)
        res = [(f"kernel[{i}]", evaluate_on_pair(x, W0, W1)) for i, x in enumerate(rep.elements())]
        meta = {"module": m.label, "report": rep.to_dict()}
        cert = VerificationCertificate.from_residuals(f"davies-kernel-D{D}", res, "linear-algebra", _bind(cfg), meta)
        if fallback and cert.verdict is Verdict.VERIFIED:
            cert.verdict = Verdict.INCONCLUSIVE
        return cert

    return [
        (f"davies-kernel-spin{n}-D{D}", lambda n=n, D=D: run(n, D))
        for n in cfg.module_spins
        for D in range(1, cfg.degree + 1)
    ]


def suite_aw3_fit(cfg: SuiteConfig):
    from .coideal import qoa_image
    from .davies import fit_relation
    from .errors import DenominatorOutOfDomain
    from .uqsl2 import evaluation_module

    def run(n):
        m = evaluation_module(n, cfg.spectral)
        pair = qoa_image(_qoa_params(cfg))
        W0, W1 = (m.represent(x) for x in (pair.W0, pair.W1))
        try:
            fit = fit_relation(None, None, pair=(W0, W1), spec=_bind(cfg) or "symbolic")
        except DenominatorOutOfDomain as exc:
            cert = VerificationCertificate.from_residuals("aw3-fit", [], "linear-algebra", _bind(cfg), {"module": m.label})
            cert.verdict = Verdict.INCONCLUSIVE
            cert.metadata["reason"] = str(exc)
            return cert
        meta = {"module": m.label, "fit": fit.to_dict()}
        return VerificationCertificate.from_residuals(
            "aw3-fit", [("aw3-fit", fit.residual)], "linear-algebra", _bind(cfg), meta
        )

    return [(f"aw3-fit-spin{n}", lambda n=n: run(n)) for n in cfg.module_spins]


def suite_rewrite_zero(cfg: SuiteConfig):
    from .corpus import check_entry, corpus
    from .certificates import encode_residual

    items = corpus(random_count=100, seed=cfg.seed, degree=cfg.degree)

    def run(name):
        entries = [check_entry(n, lab, x, cfg.fuel) for n, lab, x in items if n == name]
        false = [e for e in entries if e.false_certification]
        open_ = [e for e in entries if e.certified is not Certify.ZERO]
        cert = VerificationCertificate.from_residuals(f"rewrite-zero-{name}", [], "rewrite", {"fuel": cfg.fuel})
        cert.checked = [e.label for e in entries]
        cert.residual = [encode_residual(e.label, e.reduced) for e in false + open_]
        cert.metadata = {
            "presentation": name,
            "certified_zero": sum(e.certified is Certify.ZERO for e in entries),
            "inconclusive": len(open_),
            "false_certifications": len(false),
        }
        cert.verdict = Verdict.FAILED if false else Verdict.INCONCLUSIVE if open_ else Verdict.VERIFIED
        return cert

    return [(f"rewrite-zero-{name}", lambda n=name: run(n)) for name in BUNDLED]


SUITE_TASKS = {
    "classical-onsager": suite_classical_onsager,
    "qdg-coideal": suite_qdg_coideal,
    "augmented-coideal": suite_augmented_coideal,
    "affine-presentation": suite_affine_presentation,
    "davies-kernel": suite_davies_kernel,
    "aw3-fit": suite_aw3_fit,
    "rewrite-zero": suite_rewrite_zero,
}
assert set(SUITE_TASKS) == set(SUITES)


# -- running -------------------------------------------------------------------


def write_atomic(path: Path, text: str):
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _stem(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", text)


def run_suite(cfg: SuiteConfig, jobs: int = 1, reproducible: bool = False) -> tuple[int, list]:
    """Run every identity of the configured suite; write certificates and a manifest."""
    if cfg.suite is None:
        raise ConfigError("no suite given")
    tasks = SUITE_TASKS[cfg.suite](cfg)
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        certs = list(pool.map(lambda t: t[1](), tasks))
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    listing = []
    for (stem, _), cert in zip(tasks, certs):
        name = _stem(stem) + ".json"
        write_atomic(out / name, cert.to_json(reproducible) + "\n")
        listing.append({"file": name, "identity": cert.identity, "verdict": cert.verdict.value})
    overall = weakest(c.verdict for c in certs)
    status = EXIT[overall]
    manifest = {
        "suite": cfg.suite,
        "versions": {"qonsager": __version__, "python": platform.python_version()},
        "config_hash": cfg.digest(),
        "config": cfg.dumps(with_out=False),
        "certificates": listing,
        "verdict": overall.value,
        "exit_status": status,
    }
    if not reproducible:
        import datetime as _dt

        manifest["timestamp"] = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    write_atomic(out / "manifest.json", json.dumps(manifest, indent=1, sort_keys=True) + "\n")
    return status, certs


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qons", description="Exact verification suites for Onsager-type algebras.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=SUITES)
    v.add_argument("--config", help="suite configuration file")
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--fuel", type=int)
    v.add_argument("--degree", type=int)
    v.add_argument("--out")
    v.add_argument("--reproducible", action="store_true", help="omit timestamps from reports")
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = load(args.config) if args.config else SuiteConfig()
        if cfg.suite is not None and cfg.suite != args.suite:
            raise ConfigError(f"config names suite {cfg.suite!r} but {args.suite!r} was requested")
        cfg = cfg.with_overrides(suite=args.suite, fuel=args.fuel, degree=args.degree, out=args.out)
        if args.jobs < 1:
            raise ConfigError("--jobs must be >= 1")
        status, certs = run_suite(cfg, args.jobs, args.reproducible)
    except ConfigError as exc:
        print(f"qons: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PoleAtPoint as exc:
        print(f"qons: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ResourceBudgetExceeded as exc:
        print(f"qons: resource budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    for c in certs:
        print(f"{c.verdict.value:12s} {c.identity}")
    print(f"wrote {len(certs)} certificates to {cfg.out}")
    return status


if __name__ == "__main__":
    sys.exit(main())
