"""
Command-line front end.

    imcsim simulate --rows 16 --cols 8 --mode integer --seed 7
    imcsim compare --rows 16 --cols 8 --format table
    imcsim tree-cost | xnor-latency | bnn-infer | paper-repro

Exit status: 0 success, 1 a check failed (paper-repro row or bnn
cross-check), 2 usage or input-file error, 3 simulation error.
"""

import argparse
import csv
import io
import json
import os
import sys

import numpy as np

from imcsim import bnn, fileio
from imcsim.costmodel import (Calibration, compare_architectures, external_tree,
                              paper_calibration, xnor_latency_comparison)
from imcsim.errors import (CalibrationError, ConfigError, DomainError, ImcError,
                           ShapeError, WidthError)
from imcsim.macroarray import (MacroConfig, MacroState, Mode, Topology, mac,
                               multiply_rows, write_weights)
from imcsim.repro import load_table3, paper_claims

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE, EXIT_COMPUTE = 0, 1, 2, 3
CALIBRATION_ENV = "IMC_SIM_CALIBRATION"


class UsageError(Exception):
    pass


def _common(p):
    p.add_argument("--rows", type=int, default=16)
    p.add_argument("--cols", type=int, default=8)
    p.add_argument("--topology", choices=["conventional", "fused"], default="fused")
    p.add_argument("--mode", choices=["integer", "popcount"], default="integer")
    p.add_argument("--calibration", metavar="PATH",
                   help=f"calibration JSON (default: ${CALIBRATION_ENV}, else the shipped 65nm fit)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=["json", "csv", "table"], default="table")
    p.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")


def build_parser():
    parser = argparse.ArgumentParser(prog="imcsim", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="bit-accurate MAC on random or file-provided data")
    _common(p)
    p.add_argument("--trials", type=int, default=4)
    p.add_argument("--weights", metavar="PATH", help="0/1 weight matrix (text or JSON)")
    p.add_argument("--input", metavar="PATH", help="JSON list of input words or bit rows")

    for name, text in (("compare", "cost reports for both topologies"),
                       ("tree-cost", "adder tree schedules and costs"),
                       ("xnor-latency", "calibrated XNOR multiply latencies"),
                       ("paper-repro", "check every published quantitative claim")):
        _common(sub.add_parser(name, help=text))

    p = sub.add_parser("bnn-infer", help="run a +/-1 dense layer through macros and cross-check")
    _common(p)
    p.add_argument("--layer", metavar="PATH", help='JSON {"shape": [out, in], "weights": ...}')
    p.add_argument("--input", metavar="PATH", help='JSON {"shape": [n], "values": ...}')
    p.add_argument("--out-features", type=int, default=16)
    p.add_argument("--in-features", type=int, default=20)
    return parser


def resolve_calibration(path):
    path = path or os.environ.get(CALIBRATION_ENV)
    if not path:
        return paper_calibration()
    if not os.path.exists(path):
        raise UsageError(f"calibration file not found: {path}")
    try:
        return Calibration.load(path)
    except CalibrationError as e:
        raise UsageError(str(e)) from None


def _native(v):
    if isinstance(v, np.generic):
        return v.item()
    return v


def render(report, fmt):
    rows = [{k: _native(v) for k, v in r.items()} for r in report["rows"]]
    if fmt == "json":
        doc = {k: v for k, v in report.items() if k != "rows"}
        doc["rows"] = rows
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    if not rows:
        return ""
    header = list(rows[0])
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=header, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return buf.getvalue()
    cells = [header] + [[_cell(r[h]) for h in header] for r in rows]
    widths = [max(len(c[i]) for c in cells) for i in range(len(header))]
    lines = ["  ".join(c[i].ljust(widths[i]) for i in range(len(header))).rstrip() for c in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def _cell(v):
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def _config(args, topology=None):
    return MacroConfig(args.rows, args.cols, topology or args.topology, args.mode)


def cmd_simulate(args):
    config = _config(args)
    other = config.with_(topology=Topology.CONVENTIONAL if config.topology == Topology.FUSED_PAIRS
                         else Topology.FUSED_PAIRS)
    rng = np.random.default_rng(args.seed)
    if args.weights:
        weights = fileio.load_bit_matrix(args.weights)
    else:
        weights = rng.integers(0, 2, size=(config.rows, config.cols)).tolist()
    if args.input:
        words = fileio.load_vector(args.input)
    else:
        words = rng.integers(0, 1 << config.cols, size=args.trials).tolist()
    state = write_weights(MacroState.empty(config.rows, config.cols), weights)

    rows = []
    for i, word in enumerate(words):
        result, trace = mac(state, word, config)
        other_result, _ = mac(state, word, other)
        outputs = multiply_rows(state, word)
        if config.mode == Mode.INTEGER_SUM:
            reference = sum(o.value for o in outputs)
        else:
            reference = sum(o.popcount for o in outputs)
        rows.append({
            "trial": i,
            "input": word if isinstance(word, int) else "".join(str(b) for b in word),
            "topology": config.topology.value,
            "mode": config.mode.value,
            "result": result,
            "reference": reference,
            f"{other.topology.value}_result": other_result,
            "tree_levels": trace.tree_levels,
            "tree_latency_delta": trace.tree_latency_delta,
            "total_latency_delta": trace.total_latency_delta,
            "match": result == reference == other_result,
        })
    ok = all(r["match"] for r in rows)
    return {"command": "simulate", "seed": args.seed, "rows": rows}, ok


def cmd_compare(args, cal):
    conv = MacroConfig(args.rows, args.cols, Topology.CONVENTIONAL, args.mode)
    fused = MacroConfig(args.rows, args.cols, Topology.FUSED_PAIRS, args.mode)
    cmp = compare_architectures(conv, fused, cal)
    a, b = cmp.a.to_dict(), cmp.b.to_dict()
    rows = []
    for key in a:
        rows.append({
            "metric": key,
            "conventional": a[key],
            "fused": b[key],
            "ratio": _native(cmp.ratios[key]) if key in cmp.ratios else "",
            "basis": "calibrated" if key in CALIBRATED_FIELDS else "structural",
        })
    return {"command": "compare", "rows": rows}, True


CALIBRATED_FIELDS = {"area", "latency", "latency_total", "throughput", "area_efficiency"}


def cmd_tree_cost(args, cal):
    rows = []
    for topo in (Topology.CONVENTIONAL, Topology.FUSED_PAIRS):
        cfg = MacroConfig(args.rows, args.cols, topo)
        t = external_tree(cfg)
        if t is None:
            rows.append({"topology": topo.value, "input_count": 1, "input_width": "",
                         "style": cfg.fa_style.name, "level_widths": "", "output_width": "",
                         "fa_count": 0, "transistor_count": 0, "latency_delta": 0,
                         "ripple_latency_delta": 0})
            continue
        rows.append({
            "topology": topo.value,
            "input_count": t.input_count,
            "input_width": t.input_width,
            "style": t.style.name,
            "level_widths": "/".join(str(w) for w in t.widths),
            "output_width": t.output_width,
            "fa_count": t.fa_count,
            "transistor_count": t.transistor_count,
            "latency_delta": t.latency_delta,
            "ripple_latency_delta": t.ripple_latency_delta,
        })
    return {"command": "tree-cost", "rows": rows}, True


def cmd_xnor_latency(args, cal):
    rows = [{"variant": name, "latency_ns": lat, "reduction_vs_6T": red}
            for name, lat, red in xnor_latency_comparison(cal)]
    return {"command": "xnor-latency", "rows": rows}, True


def cmd_bnn_infer(args):
    config = _config(args)
    rng = np.random.default_rng(args.seed)
    if args.layer:
        weights = fileio.load_layer(args.layer)
    else:
        weights = (2 * rng.integers(0, 2, size=(args.out_features, args.in_features)) - 1).tolist()
    layer = bnn.BinLayer(weights)
    if args.input:
        x = fileio.load_vector(args.input)
    else:
        x = (2 * rng.integers(0, 2, size=layer.in_features) - 1).tolist()
    macros, plan = bnn.encode_layer(layer, config)
    got = bnn.infer_dot(layer, x, plan, macros)
    want = bnn.reference_dot(layer, x)
    rows = [{"neuron": i, "macro_dot": g, "reference": w, "match": g == w,
             "activation": bnn.sign_activation(g)} for i, (g, w) in enumerate(zip(got, want))]
    report = {"command": "bnn-infer", "seed": args.seed, "tiles": len(plan.tiles), "rows": rows}
    return report, all(r["match"] for r in rows)


def cmd_paper_repro(args, cal):
    claims = paper_claims(cal, args.rows, args.cols)
    rows = [c.row() for c in claims]
    report = {"command": "paper-repro", "rows": rows, "citations": load_table3()["rows"]}
    return report, all(c.passed for c in claims)


def run(args):
    """Execute parsed arguments; returns ``(report_text, exit_status)``."""
    cal = None
    if args.command in ("compare", "tree-cost", "xnor-latency", "paper-repro"):
        cal = resolve_calibration(args.calibration)
    if args.command == "simulate":
        report, ok = cmd_simulate(args)
    elif args.command == "bnn-infer":
        report, ok = cmd_bnn_infer(args)
    else:
        handler = {"compare": cmd_compare, "tree-cost": cmd_tree_cost,
                   "xnor-latency": cmd_xnor_latency, "paper-repro": cmd_paper_repro}
        report, ok = handler[args.command](args, cal)
    return render(report, args.format), EXIT_OK if ok else EXIT_CHECK_FAILED


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text, status = run(args)
    except (UsageError, OSError, KeyError, json.JSONDecodeError, ShapeError, ConfigError,
            DomainError, WidthError) as e:
        print(f"imcsim: usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ImcError, OverflowError) as e:
        print(f"imcsim: error: {e}", file=sys.stderr)
        return EXIT_COMPUTE
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
