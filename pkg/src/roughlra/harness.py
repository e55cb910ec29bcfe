"""Benchmark harness: dataset registry, four-variant comparison, report emission."""
from __future__ import annotations

import configparser
import csv
import json
import logging
import statistics
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

from .data import DecisionSystem, load_csv, synth
from .granulation import NeighborhoodConfig
from .reduction import reduce
from .state import CLASSIC, MODES, NEIGHBORHOOD, VARIANTS, ConfigError

log = logging.getLogger(__name__)

# name -> (samples, numeric, categorical, classes) as listed for the public datasets
TABLE1 = {
    "anneal": (798, 6, 32, 5),
    "credit": (690, 6, 9, 2),
    "german": (1000, 7, 12, 2),
    "heart1": (270, 7, 6, 2),
    "hepatitis": (155, 6, 13, 2),
    "horse": (368, 7, 16, 2),
    "iono": (351, 34, 0, 2),
    "wdbc": (569, 30, 0, 2),
    "zoo": (101, 0, 16, 7),
    "mocap": (78000, 33, 0, 2),
}


def schema_path(name: str) -> Path | None:
    ref = resources.files("roughlra") / "schemas" / f"{name}.schema"
    return Path(str(ref)) if ref.is_file() else None


def table1_standin(name: str, seed: int = 0) -> DecisionSystem:
    n, num, cat, classes = TABLE1[name]
    return synth(seed, n, num, cat, classes=classes)


@dataclass
class DatasetRef:
    name: str
    kind: str = "synth"                 # synth | csv | table1
    path: str | None = None
    schema: str | None = None
    params: dict[str, Any] = field(default_factory=dict)

    def load(self, data_dir: Path | None = None, seed: int = 0) -> tuple[DecisionSystem, str]:
        """Return the system and a note on where it came from."""
        if self.kind == "csv":
            return load_csv(self.path, self.schema), f"csv:{self.path}"
        if self.kind == "synth":
            p = dict(self.params)
            return synth(p.pop("seed", seed), **p), "synthetic"
        if self.kind == "table1":
            if self.name not in TABLE1:
                raise KeyError(f"unknown dataset {self.name!r}")
            csv_path = Path(self.path) if self.path else (Path(data_dir) / f"{self.name}.csv" if data_dir else None)
            schema = self.schema or schema_path(self.name)
            if csv_path is not None and csv_path.is_file() and schema is not None:
                return load_csv(csv_path, schema), f"csv:{csv_path}"
            return table1_standin(self.name, seed), "synthetic stand-in"
        raise ConfigError(f"dataset {self.name!r}: unknown kind {self.kind!r}")


def _parse_duplicates(text: str) -> dict[int, int]:
    out = {}
    for item in filter(None, (t.strip() for t in text.split(","))):
        b, _, a = item.partition(":")
        out[int(b)] = int(a)
    return out


@dataclass
class BenchSpec:
    """What to run. Plain-text INI form::

        [bench]
        mode = neighborhood
        deltas = 0.16
        variants = plain, fspa, farnemf, lra
        repetitions = 3
        seed = 7

        [dataset synth5000]
        kind = synth
        n = 5000
        numeric = 30
        categorical = 0
        duplicates = 26:0, 27:1, 28:2, 29:3
        classes = 2

        [dataset anneal]
        kind = table1            # local CSV if present, else a sized stand-in

        [dataset mine]
        kind = csv
        path = data/mine.csv
        schema = data/mine.schema
    """

    datasets: list[DatasetRef]
    mode: str = NEIGHBORHOOD
    deltas: list[float] = field(default_factory=lambda: [0.16])
    variants: list[str] = field(default_factory=lambda: list(VARIANTS))
    repetitions: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}")
        if self.repetitions < 1:
            raise ConfigError("repetitions must be at least 1")
        if self.mode == NEIGHBORHOOD and not self.deltas:
            raise ConfigError("neighborhood mode needs at least one delta")
        bad = [v for v in self.variants if v not in VARIANTS]
        if bad:
            raise ConfigError(f"unknown variants {bad}")
        if not self.datasets:
            raise ConfigError("bench spec lists no datasets")

    @classmethod
    def parse(cls, text: str, base: Path | None = None) -> "BenchSpec":
        cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
        cp.read_string(text)
        if not cp.has_section("bench"):
            raise ConfigError("bench spec needs a [bench] section")
        b = cp["bench"]
        datasets = []
        for section in cp.sections():
            if not section.startswith("dataset"):
                continue
            name = section[len("dataset"):].strip() or f"dataset{len(datasets)}"
            s = cp[section]
            kind = s.get("kind", "synth")
            ref = DatasetRef(name, kind)
            if kind == "synth":
                ref.params = {
                    "n": s.getint("n", 1000),
                    "numeric_attrs": s.getint("numeric", 10),
                    "categorical_attrs": s.getint("categorical", 0),
                    "duplicate_of": _parse_duplicates(s.get("duplicates", "")),
                    "classes": s.getint("classes", 2),
                }
                if "seed" in s:
                    ref.params["seed"] = s.getint("seed")
            for key in ("path", "schema"):
                if key in s:
                    p = Path(s[key])
                    setattr(ref, key, str(p if p.is_absolute() or base is None else base / p))
            datasets.append(ref)
        return cls(
            datasets=datasets,
            mode=b.get("mode", NEIGHBORHOOD),
            deltas=[float(x) for x in b.get("deltas", "0.16").split(",") if x.strip()],
            variants=[v.strip() for v in b.get("variants", ",".join(VARIANTS)).split(",") if v.strip()],
            repetitions=b.getint("repetitions", 1),
            seed=b.getint("seed", 0),
        )

    @classmethod
    def read(cls, path: str | Path) -> "BenchSpec":
        path = Path(path)
        return cls.parse(path.read_text(), base=path.parent)


@dataclass
class BenchReport:
    rows: list[dict[str, Any]] = field(default_factory=list)
    errors: list[dict[str, str]] = field(default_factory=list)
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict[str, Any]:
        return {"ok": self.ok, **asdict(self)}

    def row(self, dataset: str, variant: str, delta: float | None = None) -> dict[str, Any]:
        for r in self.rows:
            if r["dataset"] == dataset and r["variant"] == variant and r["delta"] == delta:
                return r
        raise KeyError((dataset, variant, delta))

    def wide(self) -> list[dict[str, Any]]:
        """One line per (dataset, delta) with one column group per variant."""
        table: dict[tuple, dict[str, Any]] = {}
        for r in self.rows:
            line = table.setdefault((r["dataset"], r["delta"]), {
                "dataset": r["dataset"], "delta": r["delta"], "n_samples": r["n_samples"],
                "n_attributes": r["n_attributes"], "final_pos_size": r["final_pos_size"]})
            v = r["variant"]
            line[f"{v}_time"] = r["median_wall_time"]
            line[f"{v}_samples_touched"] = r["counters"]["samples_touched"]
            line[f"{v}_granule_evals"] = r["counters"]["granule_evals"]
            line[f"{v}_candidate_evals"] = r["counters"]["candidate_evals"]
            line[f"{v}_reduct_size"] = len(r["reduct"])
        return list(table.values())

    def write(self, out_dir: str | Path) -> tuple[Path, Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        report = out / "bench_report.json"
        report.write_text(json.dumps(self.to_dict(), indent=2))
        table = out / "bench_table.csv"
        wide = self.wide()
        fields: list[str] = []
        for line in wide:
            fields += [k for k in line if k not in fields]
        with table.open("w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=fields)
            w.writeheader()
            w.writerows(wide)
        return report, table


def run_bench(spec: BenchSpec, data_dir: str | Path | None = None, workers: int | None = None) -> BenchReport:
    report = BenchReport()
    deltas = spec.deltas if spec.mode == NEIGHBORHOOD else [None]
    for ref in spec.datasets:
        try:
            sys, source = ref.load(Path(data_dir) if data_dir else None, spec.seed)
        except Exception as exc:  # per-dataset failure must not stop the run
            log.warning("dataset %s failed to load: %s", ref.name, exc)
            report.errors.append({"dataset": ref.name, "error": f"{type(exc).__name__}: {exc}"})
            continue
        for delta in deltas:
            cfg = NeighborhoodConfig(delta) if delta is not None else None
            sizes = {}
            for variant in spec.variants:
                runs = [reduce(sys, spec.mode, variant, cfg, workers=workers,
                               meta={"dataset": ref.name, "seed": spec.seed})
                        for _ in range(spec.repetitions)]
                first = runs[0]
                for r in runs[1:]:
                    if r.reduct != first.reduct or r.counters.deterministic() != first.counters.deterministic():
                        report.violations.append(f"{ref.name}/{variant}/delta={delta}: repetitions disagree")
                times = [r.counters.wall_time for r in runs]
                sizes[variant] = first.final_pos_size
                counters = asdict(first.counters)
                counters["wall_time"] = statistics.median(times)
                report.rows.append({
                    "dataset": ref.name, "source": source, "variant": variant, "delta": delta,
                    "mode": spec.mode, "n_samples": sys.n_samples, "n_attributes": sys.n_attributes,
                    "median_wall_time": statistics.median(times), "wall_times": times,
                    "counters": counters, "reduct": first.reduct, "reduct_names": first.reduct_names,
                    "final_pos_size": first.final_pos_size, "gamma_trace": first.gamma_trace,
                })
                log.info("%s %s delta=%s: |POS|=%d time=%.3fs touched=%d", ref.name, variant, delta,
                         first.final_pos_size, statistics.median(times), first.counters.samples_touched)
            if len(set(sizes.values())) > 1:
                report.violations.append(f"{ref.name}/delta={delta}: final_pos_size differs {sizes}")
            if "plain" in sizes and "lra" in sizes:
                plain = report.row(ref.name, "plain", delta)["counters"]["samples_touched"]
                fast = report.row(ref.name, "lra", delta)["counters"]["samples_touched"]
                if fast > plain:
                    report.violations.append(f"{ref.name}/delta={delta}: lra touched more samples than plain")
    return report
