"""Command-line pipeline.

Stages communicate through files in the output directory, so each can
be rerun independently:

  colorlex --config run.ini ingest      corpus -> clean_rounds.tsv
  colorlex --config run.ini info        -> word_info.tsv
  colorlex --config run.ini regress     -> fit_<subset>.txt / .json
  colorlex --config run.ini simulate    -> simulation.tsv / .json
  colorlex --config run.ini stimuli     -> stimuli.tsv / .json
  colorlex --config run.ini plot        -> plot_<kind>.svg

All outputs are deterministic for a given configuration and seed; the
header of every file records both.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import corpus, regress, simulate, svgplot
from .config import (
    RunConfig,
    config_hash,
    header_line,
    load_config,
    with_overrides,
)
from .errors import ColorlexError
from .informativeness import (
    SamplingConfig,
    WordInfo,
    compute_word_infos,
    derive_seed,
    read_word_infos,
    write_word_infos,
)

__all__ = ["main"]


def _out_dir(cfg: RunConfig) -> Path:
    path = Path(cfg.out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _write_json(path: Path, cfg: RunConfig, payload: dict) -> None:
    body = {"_config": config_hash(cfg), "_seed": cfg.seed, **payload}
    path.write_text(json.dumps(body, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")


def _read_rounds(cfg: RunConfig) -> list[corpus.CleanRound]:
    path = Path(cfg.out) / "clean_rounds.tsv"
    if not path.exists():
        raise ColorlexError(f"{path} not found; run `colorlex ingest` first")
    with open(path, "r", encoding="utf-8") as handle:
        return corpus.read_clean_rounds(handle)


def _read_infos(cfg: RunConfig) -> dict[str, WordInfo]:
    path = Path(cfg.out) / "word_info.tsv"
    if not path.exists():
        raise ColorlexError(f"{path} not found; run `colorlex info` first")
    with open(path, "r", encoding="utf-8") as handle:
        return {info.word: info for info in read_word_infos(handle)}


def cmd_ingest(cfg: RunConfig, args) -> None:
    spellmap = corpus.read_spellmap(cfg.spellmap) if cfg.spellmap else None
    raw, rejects = corpus.ingest(
        cfg.input,
        cfg.schema,
        delimiter=cfg.delimiter,
        language=cfg.language,
        hsl_scale=cfg.hsl_scale,
    )
    rounds = corpus.clean(raw, spellmap)
    out = _out_dir(cfg)
    header = header_line(cfg)
    with open(out / "clean_rounds.tsv", "w", encoding="utf-8") as handle:
        corpus.write_clean_rounds(handle, rounds, header)
    with open(out / "rejects.tsv", "w", encoding="utf-8") as handle:
        corpus.write_rejects(handle, rejects, header)
    _write_json(out / "ingest.json", cfg, {
        "n_raw": len(raw),
        "n_rejected": len(rejects),
        "n_clean": len(rounds),
        "n_chips": len({r.target_key for r in rounds}),
    })
    print(f"ingested {len(raw)} rounds ({len(rejects)} rejected), "
          f"{len(rounds)} clean")


def cmd_info(cfg: RunConfig, args) -> None:
    rounds = _read_rounds(cfg)
    denotations = corpus.build_denotations(rounds, cfg.min_count)
    sampling = SamplingConfig(
        max_exact=cfg.max_exact,
        sample_size=cfg.sample_size,
        iterations=cfg.iterations,
        seed=cfg.seed,
    )
    infos = compute_word_infos(denotations, sampling)
    ordered = sorted(infos.values(), key=lambda w: (-w.i_w, w.word))
    out = _out_dir(cfg)
    with open(out / "word_info.tsv", "w", encoding="utf-8") as handle:
        write_word_infos(handle, ordered, header_line(cfg))
    print(f"{len(ordered)} words at min_count={cfg.min_count} "
          f"({sum(1 for w in ordered if w.sampled)} subsampled)")


def cmd_regress(cfg: RunConfig, args) -> None:
    rounds = _read_rounds(cfg)
    infos = _read_infos(cfg)
    if args.subset == "repeated":
        rounds = corpus.repeated_chip_subset(rounds)
    rows = regress.rows_from_rounds(rounds, infos)
    label = f"informativeness ~ ease, subset={args.subset}"
    ols = regress.fit_ols(rows)
    mixed = regress.fit_random_intercept(rows)
    out = _out_dir(cfg)
    text = (
        header_line(cfg) + "\n"
        + regress.format_fit(ols, label) + "\n"
        + regress.format_fit(mixed, label)
    )
    (out / f"fit_{args.subset}.txt").write_text(text, encoding="utf-8")
    _write_json(out / f"fit_{args.subset}.json", cfg, {
        "subset": args.subset,
        "ols": regress.fit_to_dict(ols),
        "random_intercept": regress.fit_to_dict(mixed),
    })
    print(regress.format_fit(mixed, label), end="")


def cmd_simulate(cfg: RunConfig, args) -> None:
    rounds = _read_rounds(cfg)
    infos = _read_infos(cfg)
    entries, report = simulate.build_entries(rounds, infos)
    results = simulate.run_all_variants(entries)
    ordered = [results[v] for v in simulate.SystemVariant]
    out = _out_dir(cfg)
    with open(out / "simulation.tsv", "w", encoding="utf-8") as handle:
        simulate.write_simulation(handle, ordered, header_line(cfg))
    _write_json(out / "simulation.json", cfg, {
        "report": report,
        "results": {
            r.variant.value: {
                "accuracy": r.accuracy,
                "i_l": r.i_l,
                "n_interactions": r.n_interactions,
                "vocab_size": r.vocab_size,
                "counts": dict(r.counts),
            }
            for r in ordered
        },
    })
    for r in ordered:
        print(f"{r.variant.value}: accuracy={r.accuracy:.4f} "
              f"i_l={r.i_l:.4f} vocab={r.vocab_size}")


def cmd_stimuli(cfg: RunConfig, args) -> None:
    rounds = _read_rounds(cfg)
    infos = _read_infos(cfg)
    entries, _ = simulate.build_entries(rounds, infos)
    stimuli, report = simulate.generate_stimuli(
        rounds,
        entries,
        infos,
        n=args.n,
        bins=args.bins,
        seed=derive_seed(cfg.seed, "stimuli"),
    )
    out = _out_dir(cfg)
    with open(out / "stimuli.tsv", "w", encoding="utf-8") as handle:
        simulate.write_stimuli(handle, stimuli, header_line(cfg))
    _write_json(out / "stimuli.json", cfg, {
        "n": args.n,
        "bins": args.bins,
        "report": report,
    })
    print(f"{len(stimuli)} stimuli across {args.bins} ease bins")


def cmd_plot(cfg: RunConfig, args) -> None:
    rounds = _read_rounds(cfg)
    out = _out_dir(cfg)
    header = header_line(cfg).lstrip("# ")
    if args.kind == "denotations":
        denotations = corpus.build_denotations(rounds, cfg.min_count)
        if args.words:
            words = [w for w in args.words.split(",") if w]
            missing = [w for w in words if w not in denotations]
            if missing:
                raise ColorlexError(
                    f"no denotation for {missing}; "
                    f"available: {sorted(denotations)}"
                )
        else:
            by_count = sorted(
                denotations.values(), key=lambda d: (-d.count, d.word)
            )
            words = [d.word for d in by_count[:6]]
        svg = svgplot.denotation_plot(denotations, words, header)
        path = out / "plot_denotations.svg"
    else:
        infos = _read_infos(cfg)
        points = [
            (r.context_ease, infos[r.word].i_w)
            for r in rounds
            if r.word in infos
        ]
        line = None
        if len(points) >= 3 and len({p[0] for p in points}) > 1:
            fit = regress.fit_ols(
                [regress.RegressionRow(i_w, ease, "") for ease, i_w in points]
            )
            line = (fit.intercept, fit.slope)
        svg = svgplot.ease_plot(points, header, line)
        path = out / "plot_ease_vs_iw.svg"
    path.write_text(svg, encoding="utf-8")
    print(f"wrote {path}")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="colorlex",
        description="Informativeness of color words and lexical systems "
                    "in reference games.",
    )
    parser.add_argument("--config", required=True,
                        help="run configuration (INI)")
    parser.add_argument("--seed", type=int, default=None,
                        help="override the configured seed")
    parser.add_argument("--out", default=None,
                        help="override the configured output directory")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="read, validate and clean the corpus")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("info", help="compute word informativeness")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("regress",
                       help="informativeness-on-ease random-intercept fit")
    p.add_argument("--subset", choices=("all", "repeated"), default="all",
                   help="all rounds, or only targets named at least twice")
    p.set_defaults(func=cmd_regress)

    p = sub.add_parser("simulate",
                       help="compare actual/general/specific lexicons")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("stimuli",
                       help="sample rounds evenly across context ease")
    p.add_argument("--n", type=int, default=100,
                   help="number of stimuli (default 100)")
    p.add_argument("--bins", type=int, default=10,
                   help="number of ease bins (default 10)")
    p.set_defaults(func=cmd_stimuli)

    p = sub.add_parser("plot", help="render an SVG figure")
    p.add_argument("--kind", choices=("denotations", "ease_vs_iw"),
                   default="denotations")
    p.add_argument("--words", default=None,
                   help="comma-separated words for the denotation plot")
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        cfg = with_overrides(cfg, args.seed, args.out)
        args.func(cfg, args)
    except (ColorlexError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
