"""
Command-line surface of the toolkit.
Purpose: Parse argv, dispatch to the library, and return exit code plus captured stdout/stderr.
Every successful command prints one JSON document on stdout; logs and errors go to stderr.
"""
import argparse
import io
import json
from contextlib import redirect_stderr, redirect_stdout
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
import structlog
from pydantic import BaseModel
from pydantic import ValidationError as PydanticValidationError

from src.config import settings
from src.errors import IoError, ToolkitError, ValidationError
from src.eval import (
    SPLIT_NAMES,
    EvalReport,
    LabeledPredictions,
    McdSection,
    corpus_prosody,
    dataset_split,
    detection_metrics,
    mcd_batch,
)
from src.fusion import (
    FusionDims,
    FusionInputs,
    PhonemeEmbedding,
    fusion_forward,
    gradient_check,
    init_adapter,
    init_params,
    load_params,
    make_toy_regression,
    save_params,
    train,
)
from src.cli.logging import configure_logging
from src.prosody import (
    FrameSpec,
    estimate_f0,
    frame_energy,
    mel_cepstra,
    pool_frames,
    prosody_stats,
    read_frame_features,
    read_wav,
    write_frame_features,
)
from src.retrieval import SemanticEmbedding, retrieve
from src.store import (
    Label,
    build_index,
    load_index,
    read_blob,
    sarcastic_exemplars,
    save_index,
    write_blob,
)

logger = structlog.get_logger()

PROG = "sarcasm_tts"


@dataclass(frozen=True)
class CommandResult:
    exit_code: int
    stdout: str
    stderr: str


# Output payloads


class IngestSummary(BaseModel):
    count: int
    dim: int
    sarcastic: int
    non_sarcastic: int


class IndexSummary(BaseModel):
    count: int
    dim: int
    manifest: str
    blob: str


class HitOut(BaseModel):
    id: str
    score: float
    rank: int


class RetrievalResult(BaseModel):
    k: int
    hits: List[HitOut]


class PoolSummary(BaseModel):
    frames: int
    dim: int
    out: str


class FuseSummary(BaseModel):
    out: str
    rows: int
    cols: int
    exemplars: int
    exemplar_mode: str
    lora: bool


class ProsodyFiles(BaseModel):
    f0: str
    energy: str
    cepstra: str


class ProsodyExtraction(BaseModel):
    sample_rate: int
    frames: int
    files: ProsodyFiles
    pitch_mean: Optional[float] = None
    pitch_std: Optional[float] = None
    energy_mean: float
    energy_std: float
    voiced_count: int


class SplitPart(BaseModel):
    count: int
    manifest: Optional[str] = None
    blob: Optional[str] = None


class SplitSummary(BaseModel):
    seed: int
    parts: Dict[str, SplitPart]


class ParamsSummary(BaseModel):
    directory: str
    dims: Dict[str, int]
    lora_rank: Optional[int] = None
    lora_alpha: Optional[float] = None


class DetectionLabels(BaseModel):
    gold: List[Label]
    pred: List[Label]


# Helpers


def _frame_spec(args: argparse.Namespace) -> FrameSpec:
    return FrameSpec(frame_len=args.frame_len, hop=args.hop)


def _read_json(path: str, model):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise IoError(f"cannot read {path}: {e}") from e
    try:
        return model.model_validate_json(text)
    except PydanticValidationError as e:
        raise ValidationError(f"{path}: {e}") from e


def _exemplar_rows(paths: Sequence[str]) -> List[np.ndarray]:
    """Each row of each exemplar blob is one pooled prosody embedding"""
    rows: List[np.ndarray] = []
    for path in paths:
        rows.extend(read_blob(path).astype(np.float64))
    return rows


# Handlers


def cmd_ingest(args: argparse.Namespace) -> BaseModel:
    index = load_index(args.manifest, args.embeddings)
    sarcastic = len(sarcastic_exemplars(index.records))
    return IngestSummary(
        count=index.count,
        dim=index.dim,
        sarcastic=sarcastic,
        non_sarcastic=index.count - sarcastic,
    )


def cmd_build_index(args: argparse.Namespace) -> BaseModel:
    records = list(load_index(args.manifest, args.blob).records)
    if args.sarcastic_only:
        records = sarcastic_exemplars(records)
    index = build_index(records)
    save_index(index, args.out_manifest, args.out_blob)
    return IndexSummary(count=index.count, dim=index.dim, manifest=args.out_manifest, blob=args.out_blob)


def cmd_retrieve(args: argparse.Namespace) -> BaseModel:
    index = load_index(args.index_manifest, args.index_blob)
    query = SemanticEmbedding(read_blob(args.query_blob).astype(np.float64))
    hits = retrieve(index, query, args.k)
    return RetrievalResult(
        k=args.k,
        hits=[HitOut(id=h.record_id, score=h.score, rank=h.rank) for h in hits],
    )


def cmd_pool(args: argparse.Namespace) -> BaseModel:
    features = read_frame_features(args.input)
    pooled = pool_frames(features)
    write_blob(args.out, pooled.values)
    return PoolSummary(frames=features.n_frames, dim=pooled.dim, out=args.out)


def cmd_fuse(args: argparse.Namespace) -> BaseModel:
    params, adapter = load_params(args.params)
    inputs = FusionInputs(
        e_p=PhonemeEmbedding(read_blob(args.phoneme).astype(np.float64)),
        semantic=read_blob(args.semantic).astype(np.float64),
        exemplars=tuple(_exemplar_rows(args.exemplars)),
        exemplar_mode=args.exemplar_mode,
    )
    Z = fusion_forward(inputs, params, adapter).Z
    write_blob(args.out, Z)
    logger.info("fusion_written", out=args.out, rows=Z.shape[0], cols=Z.shape[1])
    return FuseSummary(
        out=args.out,
        rows=Z.shape[0],
        cols=Z.shape[1],
        exemplars=len(inputs.exemplars),
        exemplar_mode=inputs.exemplar_mode,
        lora=adapter is not None,
    )


def cmd_grad_check(args: argparse.Namespace) -> BaseModel:
    return gradient_check(seed=args.seed, trials=args.trials, h=args.step, tolerance=args.tolerance)


def cmd_extract_prosody(args: argparse.Namespace) -> BaseModel:
    wave = read_wav(args.wav)
    spec = _frame_spec(args)
    f0 = estimate_f0(wave, spec, args.f0_min, args.f0_max, args.voicing_threshold)
    energy = frame_energy(wave, spec)
    cepstra = mel_cepstra(wave, spec, args.n_mels, args.n_ceps)

    out_dir = Path(args.out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise IoError(f"cannot create {out_dir}: {e}") from e
    files = ProsodyFiles(
        f0=str(out_dir / "f0.semb"),
        energy=str(out_dir / "energy.semb"),
        cepstra=str(out_dir / "cepstra.semb"),
    )
    write_blob(files.f0, f0.to_matrix())
    write_frame_features(files.energy, energy)
    write_frame_features(files.cepstra, cepstra)

    stats = prosody_stats(f0, energy)
    return ProsodyExtraction(
        sample_rate=wave.sample_rate,
        frames=energy.n_frames,
        files=files,
        **stats.model_dump(),
    )


def cmd_eval_mcd(args: argparse.Namespace) -> BaseModel:
    if len(args.ref) != len(args.syn):
        raise ValidationError(f"{len(args.ref)} reference files but {len(args.syn)} synthesized files")
    pairs = [(read_frame_features(r), read_frame_features(s)) for r, s in zip(args.ref, args.syn)]
    mean, std, count = mcd_batch(pairs, exclude_c0=not args.include_c0)
    return EvalReport(mcd_db=McdSection(mean=mean, std=std, count=count))


def cmd_eval_prosody(args: argparse.Namespace) -> BaseModel:
    spec = _frame_spec(args)
    reports = []
    for path in args.wav:
        wave = read_wav(path)
        f0 = estimate_f0(wave, spec, args.f0_min, args.f0_max, args.voicing_threshold)
        reports.append(prosody_stats(f0, frame_energy(wave, spec)))
    return corpus_prosody(reports)


def cmd_eval_detection(args: argparse.Namespace) -> BaseModel:
    labels = _read_json(args.labels, DetectionLabels)
    return EvalReport(detection=detection_metrics(LabeledPredictions(gold=labels.gold, pred=labels.pred)))


def cmd_split(args: argparse.Namespace) -> BaseModel:
    index = load_index(args.manifest, args.blob)
    out_dir = Path(args.out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise IoError(f"cannot create {out_dir}: {e}") from e

    parts = {}
    for name, records in zip(SPLIT_NAMES, dataset_split(index.records, args.seed)):
        if not records:
            parts[name] = SplitPart(count=0)
            continue
        manifest = str(out_dir / f"{name}.json")
        blob = str(out_dir / f"{name}.semb")
        save_index(build_index(records), manifest, blob)
        parts[name] = SplitPart(count=len(records), manifest=manifest, blob=blob)
    return SplitSummary(seed=args.seed, parts=parts)


def cmd_init_params(args: argparse.Namespace) -> BaseModel:
    dims = FusionDims(d_p=args.d_p, d_t=args.d_t, d_k=args.d_k, d_v=args.d_v, d_w=args.d_w)
    params = init_params(dims, seed=args.seed)
    adapter = None
    if args.lora_d_in is not None:
        adapter = init_adapter(args.lora_d_in, dims.d_t, args.lora_rank, args.lora_alpha, seed=args.seed + 1)
    save_params(args.out_dir, params, adapter)
    return ParamsSummary(
        directory=args.out_dir,
        dims=asdict(dims),
        lora_rank=adapter.rank if adapter is not None else None,
        lora_alpha=adapter.alpha if adapter is not None else None,
    )


def cmd_train_toy(args: argparse.Namespace) -> BaseModel:
    params, adapter, batch = make_toy_regression(args.seed, rank=args.rank, alpha=args.alpha)
    params, adapter, summary = train(params, adapter, batch, args.learning_rate, args.steps)
    if args.out_dir:
        save_params(args.out_dir, params, adapter)
    return summary


# Parser


def _add_frame_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--frame-len", type=int, default=settings.frame_len, help="Samples per frame")
    parser.add_argument("--hop", type=int, default=settings.hop, help="Samples between frame starts")


def _add_pitch_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--f0-min", type=float, default=settings.f0_min, help="Lowest F0 searched (Hz)")
    parser.add_argument("--f0-max", type=float, default=settings.f0_max, help="Highest F0 searched (Hz)")
    parser.add_argument(
        "--voicing-threshold",
        type=float,
        default=settings.voicing_threshold,
        help="Normalized autocorrelation peak needed for a voiced frame",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=PROG, description="Sarcasm-aware speech synthesis toolkit")
    parser.add_argument("--log-level", default=settings.log_level, help="structlog level filter")
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = subparsers.add_parser("ingest", help="Validate an external embedding blob against its manifest")
    p.add_argument("--embeddings", required=True, help="SEMB blob")
    p.add_argument("--manifest", required=True, help="Index manifest JSON")
    p.set_defaults(handler=cmd_ingest)

    p = subparsers.add_parser("build-index", help="Build and save an exemplar index")
    p.add_argument("--manifest", required=True)
    p.add_argument("--blob", required=True)
    p.add_argument("--out-manifest", required=True)
    p.add_argument("--out-blob", required=True)
    p.add_argument("--sarcastic-only", action="store_true", help="Keep only sarcastic records")
    p.set_defaults(handler=cmd_build_index)

    p = subparsers.add_parser("retrieve", help="Top-K exemplars for a semantic embedding")
    p.add_argument("--index-manifest", required=True)
    p.add_argument("--index-blob", required=True)
    p.add_argument("--query-blob", required=True, help="E_s matrix (T_t x d_t)")
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(handler=cmd_retrieve)

    p = subparsers.add_parser("pool", help="Mean-pool frame features into one prosody embedding")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_pool)

    p = subparsers.add_parser("fuse", help="Cross-attention fusion with prosody conditioning")
    p.add_argument("--phoneme", required=True, help="E_p matrix blob")
    p.add_argument("--semantic", required=True, help="E_s blob, or text hidden states when params carry LoRA")
    p.add_argument("--exemplars", nargs="*", default=[], help="Pooled exemplar blobs, one embedding per row")
    p.add_argument("--params", required=True, help="Parameter directory")
    p.add_argument("--out", required=True, help="Z matrix blob")
    p.add_argument("--exemplar-mode", choices=["sum", "mean"], default=settings.exemplar_mode)
    p.set_defaults(handler=cmd_fuse)

    p = subparsers.add_parser("grad-check", help="Analytic vs finite-difference gradients")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--step", type=float, default=1e-3)
    p.add_argument("--tolerance", type=float, default=1e-3)
    p.set_defaults(handler=cmd_grad_check)

    p = subparsers.add_parser("extract-prosody", help="F0, energy and mel-cepstra of a WAV file")
    p.add_argument("--wav", required=True)
    p.add_argument("--out-dir", required=True)
    _add_frame_flags(p)
    _add_pitch_flags(p)
    p.add_argument("--n-mels", type=int, default=settings.n_mels)
    p.add_argument("--n-ceps", type=int, default=settings.n_ceps)
    p.set_defaults(handler=cmd_extract_prosody)

    p = subparsers.add_parser("eval", help="Objective metrics")
    metrics = p.add_subparsers(dest="metric", required=True, metavar="metric")

    m = metrics.add_parser("mcd", help="DTW-aligned mel-cepstral distortion")
    m.add_argument("--ref", nargs="+", required=True, help="Reference cepstra blobs")
    m.add_argument("--syn", nargs="+", required=True, help="Synthesized cepstra blobs, paired by position")
    m.add_argument("--include-c0", action="store_true")
    m.set_defaults(handler=cmd_eval_mcd)

    m = metrics.add_parser("prosody", help="Pitch and energy mean and std over WAV files")
    m.add_argument("--wav", nargs="+", required=True)
    _add_frame_flags(m)
    _add_pitch_flags(m)
    m.set_defaults(handler=cmd_eval_prosody)

    m = metrics.add_parser("detection", help="Weighted precision, recall and F1")
    m.add_argument("--labels", required=True, help='JSON file {"gold": [...], "pred": [...]}')
    m.set_defaults(handler=cmd_eval_detection)

    p = subparsers.add_parser("split", help="Stratified 8:1:1 train/val/test split")
    p.add_argument("--manifest", required=True)
    p.add_argument("--blob", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(handler=cmd_split)

    p = subparsers.add_parser("init-params", help="Write a seeded fusion parameter directory")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--seed", type=int, default=settings.init_seed)
    dims = FusionDims()
    for name in ("d_p", "d_t", "d_k", "d_v", "d_w"):
        p.add_argument(f"--{name.replace('_', '-')}", dest=name, type=int, default=getattr(dims, name))
    p.add_argument("--lora-d-in", type=int, help="Add a LoRA encoder layer with this input width")
    p.add_argument("--lora-rank", type=int, default=settings.lora_rank)
    p.add_argument("--lora-alpha", type=float, default=settings.lora_alpha)
    p.set_defaults(handler=cmd_init_params)

    p = subparsers.add_parser("train-toy", help="Seeded toy regression with a frozen LoRA base")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--learning-rate", type=float, default=1e-2)
    p.add_argument("--rank", type=int, default=2)
    p.add_argument("--alpha", type=float, default=4.0)
    p.add_argument("--out-dir", help="Write the trained parameters here")
    p.set_defaults(handler=cmd_train_toy)

    return parser


def run(argv: Sequence[str]) -> CommandResult:
    """Run one command; never raises and never exits the process"""
    out, err = io.StringIO(), io.StringIO()
    parser = build_parser()
    try:
        with redirect_stdout(out), redirect_stderr(err):
            args = parser.parse_args(list(argv))
    except SystemExit as e:
        code = e.code if isinstance(e.code, int) else 2
        return CommandResult(exit_code=code, stdout=out.getvalue(), stderr=err.getvalue())

    configure_logging(args.log_level, settings.log_json, stream=err)
    handler: Callable[[argparse.Namespace], BaseModel] = args.handler
    try:
        payload = handler(args)
    except ToolkitError as e:
        logger.error("command_failed", command=args.command, error=type(e).__name__)
        err.write(json.dumps({"error": type(e).__name__, "message": str(e)}) + "\n")
        return CommandResult(exit_code=1, stdout="", stderr=err.getvalue())

    out.write(payload.model_dump_json(indent=2, exclude_none=True) + "\n")
    return CommandResult(exit_code=0, stdout=out.getvalue(), stderr=err.getvalue())
