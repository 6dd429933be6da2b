"""Command-line driver: run Monte-Carlo trials and write CSV results."""

import argparse
import itertools
import json
import logging
import sys
from pathlib import Path

from .channel import dump_channels, trial_channels
from .config import KNOWN_KEYS, ConfigError, config_from_dict
from .montecarlo import ALGORITHMS, AllInfeasibleError, aggregate, solve_trial
from .report import emit_aggregate_csv, emit_csv

log = logging.getLogger("aloha_backscatter")


def parse_sweep(text):
    """``"key=v1,v2"`` -> ``("key", [v1, v2])`` with JSON-decoded values."""
    key, sep, values = text.partition("=")
    key = key.strip()
    if not sep or not key or not values.strip():
        raise ConfigError(f"sweep must look like key=v1,v2,...: {text!r}")
    if key not in KNOWN_KEYS:
        raise ConfigError(f"unknown sweep key: {key}")
    out = []
    for raw in values.split(","):
        raw = raw.strip()
        try:
            out.append(json.loads(raw))
        except json.JSONDecodeError:
            raise ConfigError(f"sweep value for {key} is not a number: {raw!r}") from None
    return key, out


def sweep_points(sweeps):
    """Cross product of the sweep axes as a list of ``{key: value}`` dicts."""
    if not sweeps:
        return [{}]
    keys = [k for k, _ in sweeps]
    if len(set(keys)) != len(keys):
        raise ConfigError("a sweep key was given more than once")
    return [dict(zip(keys, combo)) for combo in itertools.product(*(v for _, v in sweeps))]


def load_document(path):
    if path is None:
        return {}
    text = Path(path).read_text()
    if not text.strip():
        return {}
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed config document: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError("config document must be a JSON object")
    return doc


def build_parser():
    ap = argparse.ArgumentParser(
        prog="aloha-backscatter",
        description="Max-min fair resource allocation for slotted-ALOHA backscatter networks.",
    )
    ap.add_argument("--config", help="JSON config file (missing keys take defaults)")
    ap.add_argument("--algorithm", default="proposed", choices=ALGORITHMS + ("all",))
    ap.add_argument("--trials", type=int, help="number of Monte-Carlo trials")
    ap.add_argument("--seed", type=int, help="root seed (non-negative, < 2**64)")
    ap.add_argument("--sweep", action="append", default=[], metavar="KEY=V1,V2,...",
                    help="sweep a config key; repeat for a cross product")
    ap.add_argument("--out", default="results.csv", help="per-trial CSV; aggregates go to <out>.agg.csv")
    ap.add_argument("--trace", action="store_true", help="add the per-iteration objective trace column")
    ap.add_argument("--dump-channels", metavar="PATH", help="write channel realisations (first sweep point) as CSV")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    algorithms = ALGORITHMS if args.algorithm == "all" else (args.algorithm,)

    try:
        base = load_document(args.config)
        if args.trials is not None:
            base["trials"] = args.trials
        if args.seed is not None:
            base["seed"] = args.seed
        points = sweep_points([parse_sweep(s) for s in args.sweep])
        configs = [(pt, config_from_dict({**base, **pt})) for pt in points]
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    reports, aggregates, channel_rows = [], [], []
    for pt, cfg in configs:
        log.info("running %d trials at %s", cfg.trials, pt or "defaults")
        batch = []
        for t in range(cfg.trials):
            batch.extend(solve_trial(cfg, t, algorithms, pt))
            if args.dump_channels and pt is points[0]:
                channel_rows.append((t, trial_channels(cfg, t)[1]))
        if batch:
            aggregates.append(aggregate(batch, list(algorithms)))
        reports.extend(batch)

    if not reports:
        print("no trials requested", file=sys.stderr)
        return 2
    out = Path(args.out)
    try:
        emit_csv(reports, out, trace=args.trace)
        emit_aggregate_csv(aggregates, out.with_name(out.name + ".agg.csv"))
        if args.dump_channels:
            dump_channels(channel_rows, args.dump_channels)
    except OSError as exc:
        print(f"cannot write results: {exc}", file=sys.stderr)
        return 2

    if not any(r.feasible for r in reports):
        print(str(AllInfeasibleError("every trial was infeasible for every algorithm")), file=sys.stderr)
        return 1
    for agg in aggregates:
        for st in agg.stats.values():
            print(f"{json.dumps(agg.sweep) if agg.sweep else ''} {st.algorithm}: "
                  f"mean={st.mean_objective:.6g} +-{st.ci_halfwidth:.3g} "
                  f"feasible={st.feasible_rate:.3f} jain={st.mean_jain_fi:.4f}".strip())
    return 0


if __name__ == "__main__":
    sys.exit(main())
