"""Command-line front end: dataset generation, analyses, oracle tables, state dumps.

Exit codes: 0 success, 2 validation error, 1 I/O error.
Seed precedence: QRT_SEED env var > --seed flag > config file > default 0.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import dataset as ds
from . import oracle, stats
from .sample import FAMILY_IDS, FamilySpec, generate_dataset, rng_stream, sample_state
from .witness import WITNESS_IDS

EXIT_OK, EXIT_IO, EXIT_VALIDATION = 0, 1, 2


class ValidationError(ValueError):
    pass


def _load_config(args) -> dict:
    cfg = {}
    if getattr(args, "config", None):
        try:
            cfg = json.loads(Path(args.config).read_text())
        except OSError as e:
            raise OSError(f"cannot read config: {e}") from e
    for key in ("n_list", "per_family", "seed", "families", "threads", "sn_depth"):
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    if os.environ.get("QRT_SEED"):
        cfg["seed"] = int(os.environ["QRT_SEED"])
    cfg.setdefault("n_list", [3])
    cfg.setdefault("per_family", 200)
    cfg.setdefault("seed", 0)
    cfg.setdefault("families", list(FAMILY_IDS))
    cfg.setdefault("threads", os.cpu_count() or 1)
    ns = cfg["n_list"]
    if not all(isinstance(n, int) and 1 <= n <= 8 for n in ns):
        raise ValidationError("n values must be integers in 1..8")
    if cfg["per_family"] < 1:
        raise ValidationError("per_family must be >= 1")
    bad = [f for f in cfg["families"] if f not in FAMILY_IDS]
    if bad:
        raise ValidationError(f"unknown families: {bad}")
    return cfg


def cmd_generate(args) -> int:
    cfg = _load_config(args)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    params = {"sn_depth": cfg["sn_depth"]} if cfg.get("sn_depth") else None
    for n in cfg["n_list"]:
        records, _ = generate_dataset(
            n,
            cfg["per_family"],
            cfg["seed"],
            families=tuple(cfg["families"]),
            params=params,
            threads=cfg["threads"],
        )
        csv_path = out_dir / f"dataset_n{n}.csv"
        h = ds.write_dataset(records, csv_path)
        ds.write_manifest(
            out_dir / f"manifest_n{n}.json",
            {**cfg, "n": n},
            h,
            records,
        )
        print(f"wrote {csv_path} ({len(records)} rows, sha256 {h[:12]}...)")
    return EXIT_OK


def _load_matrix(path):
    records = ds.read_csv(path)
    fams = np.array([r.family for r in records])
    vals = np.array([[r.values[w] for w in WITNESS_IDS] for r in records])
    text = Path(path).read_text().encode()
    return records, fams, vals, ds.content_hash(text)


def _write_report(out_dir: Path, name: str, csv_text: str, md_text: str, meta: dict):
    (out_dir / f"{name}.csv").write_text(csv_text)
    (out_dir / f"{name}.md").write_text(md_text)
    (out_dir / f"{name}.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")


def cmd_analyze(args) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    records, fams, vals, h = _load_matrix(args.dataset)
    meta = {"input": str(args.dataset), "input_sha256": h, "which": args.which}
    if args.which == "correlations":
        rep = stats.correlation_report(vals)
        hdr = "," + ",".join(WITNESS_IDS)
        rows_r = [hdr] + [
            w + "," + ",".join(ds.format_float(v) for v in rep.r[i])
            for i, w in enumerate(WITNESS_IDS)
        ]
        rows_p = [hdr] + [
            w + "," + ",".join(ds.format_float(v) for v in rep.p[i])
            for i, w in enumerate(WITNESS_IDS)
        ]
        md = ["| witness | " + " | ".join(WITNESS_IDS) + " |",
              "|" + "---|" * (len(WITNESS_IDS) + 1)]
        for i, w in enumerate(WITNESS_IDS):
            cells = [
                f"{rep.r[i, j]:.6f}{stats.significance_stars(rep.p[i, j])}"
                for j in range(len(WITNESS_IDS))
            ]
            md.append("| " + w + " | " + " | ".join(cells) + " |")
        md += ["", f"N = {rep.n_samples}; input sha256 {h}",
               "stars: * p < 0.10, ** p < 0.05"]
        _write_report(out_dir, "correlations_r", "\n".join(rows_r) + "\n",
                      "\n".join(md) + "\n", meta)
        (out_dir / "correlations_p.csv").write_text("\n".join(rows_p) + "\n")
    elif args.which == "pairwise":
        table = stats.pairwise_table(fams, vals, eps=args.eps)
        fam_ids = sorted(set(fams.tolist()))
        hdr = "family," + ",".join(WITNESS_IDS)
        rows = [hdr]
        md = ["| family | " + " | ".join(WITNESS_IDS) + " |",
              "|" + "---|" * (len(WITNESS_IDS) + 1)]
        for f in fam_ids:
            cells_csv, cells_md = [], []
            for w in WITNESS_IDS:
                if (f, w) in table.win_pct:
                    cells_csv.append(ds.format_float(table.win_pct[(f, w)]))
                    cells_md.append(f"{table.win_pct[(f, w)]:.1f}")
                else:
                    cells_csv.append("")
                    cells_md.append("--")
            rows.append(f + "," + ",".join(cells_csv))
            md.append("| " + f + " | " + " | ".join(cells_md) + " |")
        md += ["", f"input sha256 {h}; tie epsilon {args.eps}"]
        _write_report(out_dir, "pairwise", "\n".join(rows) + "\n", "\n".join(md) + "\n", meta)
    elif args.which == "pca":
        res = stats.pca(vals, standardize=not args.no_standardize)
        order = res.witness_order
        ratios = ",".join(ds.format_float(v) for v in res.explained_variance_ratio)
        load_rows = ["witness," + ",".join(f"pc{k+1}" for k in range(len(order)))]
        for i, w in enumerate(order):
            load_rows.append(w + "," + ",".join(ds.format_float(v) for v in res.loadings[i]))
        proj_rows = ["family,pc1,pc2"]
        for f, (a, b) in zip(fams, res.projections):
            proj_rows.append(f"{f},{ds.format_float(a)},{ds.format_float(b)}")
        md = [
            "PCA (standardized)" if res.standardized else "PCA (covariance)",
            "",
            "explained variance ratios: "
            + ", ".join(f"{v:.4f}" for v in res.explained_variance_ratio),
            f"input sha256 {h}",
        ]
        _write_report(out_dir, "pca_ratios", "ratios\n" + ratios + "\n",
                      "\n".join(md) + "\n", meta)
        (out_dir / "pca_loadings.csv").write_text("\n".join(load_rows) + "\n")
        (out_dir / "pca_projections.csv").write_text("\n".join(proj_rows) + "\n")
    elif args.which == "averages":
        hdr = "family,n,median,q1,q3,mean,sd"
        rows = [hdr]
        md = ["| family | n | median | q1 | q3 | mean | sd |", "|" + "---|" * 7]
        groups = sorted({(r.family, r.n) for r in records})
        per_state = vals.mean(axis=1)
        fam_n = np.array([(r.family, r.n) for r in records], dtype=object)
        for f, n in groups:
            sel = np.array([fn[0] == f and fn[1] == n for fn in fam_n])
            x = per_state[sel]
            q1, med, q3 = np.percentile(x, [25, 50, 75])
            rows.append(
                f"{f},{n},{ds.format_float(med)},{ds.format_float(q1)},"
                f"{ds.format_float(q3)},{ds.format_float(x.mean())},"
                f"{ds.format_float(x.std(ddof=1) if x.size > 1 else 0.0)}"
            )
            md.append(
                f"| {f} | {n} | {med:.4f} | {q1:.4f} | {q3:.4f} | "
                f"{x.mean():.4f} | {(x.std(ddof=1) if x.size > 1 else 0.0):.4f} |"
            )
        md += ["", f"input sha256 {h}"]
        _write_report(out_dir, "averages", "\n".join(rows) + "\n", "\n".join(md) + "\n", meta)
    else:
        raise ValidationError(f"unknown analysis {args.which!r}")
    print(f"wrote {args.which} report to {out_dir}")
    return EXIT_OK


def _table1_lines(n_lo: int, n_hi: int):
    fams = ("haar", "imag", "real")
    lines_csv = ["n,witness," + ",".join(fams)]
    lines_md = ["| n | witness | " + " | ".join(fams) + " |", "|" + "---|" * 5]
    for n in range(n_lo, n_hi + 1):
        for w in WITNESS_IDS:
            exact = [oracle.expected_value_exact(f, w, n) for f in fams]
            lines_csv.append(
                f"{n},{w}," + ",".join(f"{e.numerator}/{e.denominator}" for e in exact)
            )
            lines_md.append(
                f"| {n} | {w} | " + " | ".join(f"{float(e):.8f}" for e in exact) + " |"
            )
    return lines_csv, lines_md


def _props_cells(n: int):
    cells = []
    for w in ("ferm", "imag", "real", "stab", "sn", "uent"):
        cells.append(("ent", w, oracle.expected_value("ent", w, n)))
    for w in ("ent", "imag", "real", "uent"):
        cells.append(("ferm", w, oracle.expected_value("ferm", w, n)))
    cells.append(("uent", "ferm", oracle.expected_value("uent", "ferm", n)))
    return cells


def cmd_oracle(args) -> int:
    out_dir = Path(args.out) if args.out else None
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)
    if args.target == "table1":
        lines_csv, lines_md = _table1_lines(args.n_min, args.n_max)
        if out_dir:
            (out_dir / "table1.csv").write_text("\n".join(lines_csv) + "\n")
            (out_dir / "table1.md").write_text("\n".join(lines_md) + "\n")
            print(f"wrote table1 to {out_dir}")
        else:
            print("\n".join(lines_md))
    elif args.target == "props":
        lines = ["family,witness,expected"]
        for n in range(args.n_min, args.n_max + 1):
            for fam, w, v in _props_cells(n):
                lines.append(f"{fam},{w},{ds.format_float(v)}  # n={n}")
        if out_dir:
            (out_dir / "props.csv").write_text("\n".join(lines) + "\n")
        else:
            print("\n".join(lines))
    else:
        raise ValidationError(f"unknown target {args.target!r}")
    if args.check:
        failures = run_mc_check(
            range(args.n_min, args.n_max + 1),
            per_family=args.per_family,
            seed=args.seed if args.seed is not None else 0,
            target=args.target,
        )
        return EXIT_VALIDATION if failures else EXIT_OK
    return EXIT_OK


def run_mc_check(n_values, per_family: int, seed: int, target: str = "table1") -> int:
    """Sample-mean vs closed-form check, 4 standard errors per cell."""
    fams = ("haar", "imag", "real") if target == "table1" else ("ent", "ferm", "uent")
    failures = 0
    for n in n_values:
        records, _ = generate_dataset(n, per_family, seed, families=fams)
        by_fam = {}
        for rec in records:
            by_fam.setdefault(rec.family, []).append(
                [rec.values[w] for w in WITNESS_IDS]
            )
        for fam in fams:
            arr = np.array(by_fam[fam])
            for wi, w in enumerate(WITNESS_IDS):
                if not oracle.has_closed_form(fam, w, n):
                    continue
                exp = oracle.expected_value(fam, w, n)
                mean = arr[:, wi].mean()
                se = arr[:, wi].std(ddof=1) / np.sqrt(arr.shape[0])
                ok = abs(mean - exp) <= 4.0 * se + 1e-12
                status = "pass" if ok else "FAIL"
                print(
                    f"{status} n={n} {fam:5s} {w:4s} mean={mean:.6f} "
                    f"expected={exp:.6f} se={se:.2e}"
                )
                failures += 0 if ok else 1
    return failures


def cmd_states(args) -> int:
    if args.family not in FAMILY_IDS:
        raise ValidationError(f"unknown family {args.family!r}")
    if not 1 <= args.n <= 8:
        raise ValidationError("n must be in 1..8")
    entries = []
    for sid in range(args.count):
        rng = rng_stream(args.seed, args.family, sid)
        psi = sample_state(FamilySpec(args.family, args.n), rng)
        entries.append((args.family, args.n, sid, psi.amps))
    out = Path(args.out)
    if args.format == "csv":
        out.write_text(ds.dump_states_csv(entries))
    else:
        out.write_bytes(ds.dump_states_binary(entries))
    print(f"wrote {args.count} states to {out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qrtlab",
        description="Sample free states of eight quantum resource theories and "
        "cross-evaluate all resource witnesses.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="generate witness datasets")
    g.add_argument("--config", help="JSON config file")
    g.add_argument("--n", dest="n_list", type=int, nargs="+", default=None)
    g.add_argument("--per-family", dest="per_family", type=int, default=None)
    g.add_argument("--seed", type=int, default=None)
    g.add_argument("--families", nargs="+", default=None)
    g.add_argument("--threads", type=int, default=None)
    g.add_argument("--sn-depth", dest="sn_depth", type=int, default=None)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_generate)

    a = sub.add_parser("analyze", help="run an analysis on a dataset CSV")
    a.add_argument("--dataset", required=True)
    a.add_argument("--which", required=True,
                   choices=("correlations", "pairwise", "pca", "averages"))
    a.add_argument("--out", required=True)
    a.add_argument("--eps", type=float, default=stats.DEFAULT_TIE_EPS)
    a.add_argument("--no-standardize", action="store_true")
    a.set_defaults(func=cmd_analyze)

    o = sub.add_parser("oracle", help="emit closed-form tables, optionally MC-checked")
    o.add_argument("--target", choices=("table1", "props"), default="table1")
    o.add_argument("--n-min", type=int, default=3)
    o.add_argument("--n-max", type=int, default=8)
    o.add_argument("--check", action="store_true")
    o.add_argument("--per-family", dest="per_family", type=int, default=500)
    o.add_argument("--seed", type=int, default=None)
    o.add_argument("--out")
    o.set_defaults(func=cmd_oracle)

    s = sub.add_parser("states", help="dump raw sampled state amplitudes")
    s.add_argument("--family", required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--count", type=int, default=10)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--format", choices=("csv", "bin"), default="csv")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_states)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, ds.SchemaError, ValueError) as e:
        print(f"validation error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as e:
        print(f"io error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
