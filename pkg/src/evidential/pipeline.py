"""Top-level orchestration: train, extract, adjust, drop, evaluate.

Every stage writes its artifact into the output directory, so any downstream
stage can be re-run from disk and reproduce the final report byte for byte.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path

from . import formats
from .belief import Frame
from .correlate import Group, build_graph, pearson_matrix, prune_components
from .errors import PipelineError
from .evaluate import EvaluationReport, evaluate_set
from .expert import all_modify, part_modify
from .extract import M3_NORMS, M3_THETAS, METHODS, build_frequency_table, extract_bpas

EXPERT_MODES = ("none", "part", "all")
DROP_SOURCES = ("none", "file", "auto")


@dataclass
class PipelineConfig:
    method: str = "2a"
    m3_norm: str = "global"
    m3_theta: str = "one"
    expert_mode: str = "none"
    drop_source: str = "none"
    drop_params_path: str | None = None
    threshold: float = 0.5
    min_pairs: int = 10
    min_support: int = 1
    prune_group: Group = Group.BIOCHEMICAL  # tag for the auto-prune report
    seed: int | None = None  # only meaningful when the caller generated the data

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}")
        if self.m3_norm not in M3_NORMS or self.m3_theta not in M3_THETAS:
            raise ValueError("bad method-3 variant")
        if self.expert_mode not in EXPERT_MODES:
            raise ValueError(f"expert_mode must be one of {EXPERT_MODES}")
        if self.drop_source not in DROP_SOURCES:
            raise ValueError(f"drop_source must be one of {DROP_SOURCES}")
        if self.drop_source == "file" and not self.drop_params_path:
            raise ValueError("drop_source 'file' needs drop_params_path")
        if not 0.0 < self.threshold <= 1.0:
            raise ValueError("threshold must be in (0, 1]")
        if self.min_pairs < 2:
            raise ValueError("min_pairs must be at least 2")
        if self.min_support < 1:
            raise ValueError("min_support must be at least 1")
        self.prune_group = Group(self.prune_group)


@contextmanager
def _stage(name: str):
    try:
        yield
    except PipelineError:
        raise
    except Exception as exc:
        raise PipelineError(name, exc) from exc


def run_pipeline(
    config: PipelineConfig,
    train_path,
    test_path,
    intervals_path,
    expert_path=None,
    out_dir="pipeline-out",
) -> EvaluationReport:
    """Run every stage and return the final report.

    The frame is the sorted union of outcome labels seen in the train and
    test files. Auto-pruning treats all parameters of the train file as one
    measurement group; keep groups in separate files when that matters.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    with _stage("parse"):
        train_params, train_cases = formats.parse_case_table(train_path)
        _, test_cases = formats.parse_case_table(test_path)
        intervals = formats.parse_intervals(intervals_path)
        expert = None
        if config.expert_mode != "none":
            if expert_path is None:
                raise ValueError("expert modification requested without an expert table")
            expert = formats.read_bpa_set(expert_path)
        labels = sorted({c.outcome for c in train_cases} | {c.outcome for c in test_cases})
        frame = Frame(tuple(labels))

    with _stage("frequency"):
        table = build_frequency_table(train_cases, intervals, frame)
        formats.write_frequency_table(table, out / "frequency_table.json")

    with _stage("extract"):
        bpa = extract_bpas(
            table,
            config.method,
            m3_norm=config.m3_norm,
            m3_theta=config.m3_theta,
            min_support=config.min_support,
        )
        formats.write_bpa_set(bpa, out / "bpa.json")

    if config.expert_mode != "none":
        with _stage("expert"):
            modify = part_modify if config.expert_mode == "part" else all_modify
            bpa = modify(bpa, expert)
            formats.write_bpa_set(bpa, out / "bpa_modified.json")

    drop: frozenset[str] = frozenset()
    if config.drop_source == "file":
        with _stage("drop"):
            drop = formats.read_drop_params(config.drop_params_path)
            (out / "dropped_params.txt").write_text("".join(f"{p}\n" for p in sorted(drop)))
    elif config.drop_source == "auto":
        with _stage("prune"):
            matrix = pearson_matrix(train_cases, train_params, config.min_pairs)
            graph = build_graph(matrix, config.threshold, config.prune_group)
            result = prune_components(graph)
            drop = result.removed
            formats.write_prune_report(graph, result, out / "prune_report.json")
            formats.write_removal_list(result, out / "dropped_params.txt")

    with _stage("evaluate"):
        report = evaluate_set(test_cases, bpa, intervals, drop)
        formats.write_report(report, out / "report.json")
        (out / "report.txt").write_text(formats.format_report_table([report]) + "\n")
    return report
