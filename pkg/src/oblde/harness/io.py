"""CSV/JSON emission and reading of run records and summaries.

Floats are written with ``repr`` (shortest round-tripping form), so a value
read back is bit-identical to the one written.
"""

import csv
import io as _io
import json
from pathlib import Path

from ..core import RNG_VERSION, ContractError
from ..de import RunRecord
from .config import ExperimentConfig

SUMMARY_HEADER = ["function", "D", "algorithm", "runs", "mean", "std", "median", "best", "worst"]


def csv_header(n_checkpoints):
    return (["run", "seed", "function", "D", "algorithm"]
            + [f"checkpoint_{k}" for k in range(1, n_checkpoints + 1)]
            + ["final_fev", "nfes", "wall_ms"])


def _num(x):
    return repr(float(x))


def records_to_csv(pairs, wall_time=True):
    """CSV text for ``(run_index, RunRecord)`` pairs.

    With ``wall_time=False`` the ``wall_ms`` cells are left empty so that two
    runs of the same configuration produce byte-identical files.
    """
    if not pairs:
        raise ContractError("emit needs at least one record")
    width = len(pairs[0][1].checkpoint_fevs)
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(csv_header(width))
    for run_index, r in pairs:
        if len(r.checkpoint_fevs) != width:
            raise ContractError("all records must share one checkpoint schedule")
        w.writerow([run_index, r.seed, r.function, r.dimension, r.algorithm]
                   + [_num(v) for v in r.checkpoint_fevs]
                   + [_num(r.final_fev), r.nfes,
                      _num(r.wall_time * 1e3) if wall_time else ""])
    return buf.getvalue()


def records_to_json(pairs, config=None, wall_time=True):
    if not pairs:
        raise ContractError("emit needs at least one record")
    doc = {
        "rng_version": RNG_VERSION,
        "config": config.to_flat() if config is not None else None,
        "records": [
            {
                "run": run_index,
                "seed": r.seed,
                "function": r.function,
                "D": r.dimension,
                "algorithm": r.algorithm,
                "checkpoint_nfes": list(r.checkpoints),
                "checkpoint_fevs": [float(v) for v in r.checkpoint_fevs],
                "final_fev": float(r.final_fev),
                "nfes": r.nfes,
                "wall_ms": r.wall_time * 1e3 if wall_time else None,
            }
            for run_index, r in pairs
        ],
    }
    return json.dumps(doc, indent=1) + "\n"


def emit(pairs, fmt, path, config=None, wall_time=True):
    """Write records as ``csv`` or ``json``; returns the path written."""
    if fmt == "csv":
        text = records_to_csv(pairs, wall_time)
    elif fmt == "json":
        text = records_to_json(pairs, config, wall_time)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    path = Path(path)
    path.write_text(text)
    return path


def _record(run_index, seed, function, D, algorithm, fevs, final, nfes, wall_ms, marks=None):
    return run_index, RunRecord(
        seed=int(seed), function=function, dimension=int(D), algorithm=algorithm,
        checkpoints=list(marks) if marks is not None else [],
        checkpoint_fevs=[float(v) for v in fevs], final_fev=float(final), nfes=int(nfes),
        wall_time=float(wall_ms) / 1e3 if wall_ms not in (None, "") else 0.0,
    )


def read_csv(path_or_text):
    text = _text(path_or_text)
    rows = list(csv.DictReader(_io.StringIO(text)))
    out = []
    for row in rows:
        k = sorted((c for c in row if c.startswith("checkpoint_")), key=lambda c: int(c[11:]))
        out.append(_record(int(row["run"]), row["seed"], row["function"], row["D"], row["algorithm"],
                           [row[c] for c in k], row["final_fev"], row["nfes"], row["wall_ms"]))
    return out


def read_json(path_or_text):
    """Returns ``(pairs, config)``; ``config`` is ``None`` when the file has no echo."""
    doc = json.loads(_text(path_or_text))
    cfg = doc.get("config")
    config = ExperimentConfig.from_flat(cfg) if cfg is not None else None
    pairs = [
        _record(r["run"], r["seed"], r["function"], r["D"], r["algorithm"], r["checkpoint_fevs"],
                r["final_fev"], r["nfes"], r["wall_ms"], r.get("checkpoint_nfes"))
        for r in doc["records"]
    ]
    return pairs, config


def summary_to_csv(rows):
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUMMARY_HEADER)
    for s in rows:
        w.writerow([s.function, s.dimension, s.algorithm, s.runs, _num(s.mean), _num(s.std),
                    _num(s.median), _num(s.best), _num(s.worst)])
    return buf.getvalue()


def table_to_csv(header, rows):
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_num(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _text(path_or_text):
    if isinstance(path_or_text, Path) or ("\n" not in str(path_or_text)):
        return Path(path_or_text).read_text()
    return path_or_text
