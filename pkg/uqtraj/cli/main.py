# Copyright (c) 2023 uqtraj developers
#
# Permission is hereby granted, free of charge, to any person obtaining a copy of
# this software and associated documentation files (the "Software"), to deal in
# the Software without restriction, including without limitation the rights to
# use, copy, modify, merge, publish, distribute, sublicense, and/or sell copies of
# the Software, and to permit persons to whom the Software is furnished to do so,
# subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in all
# copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY, FITNESS
# FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE AUTHORS OR
# COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER LIABILITY, WHETHER
# IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM, OUT OF OR IN
# CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE SOFTWARE.


import argparse
import json
import os
import sys
import warnings
from dataclasses import asdict, replace

import numpy as np
import pandas as pd

from uqtraj import __version__
from uqtraj.cli.config import METHODS, ExperimentConfig
from uqtraj.cli.manifest import count_check, write_manifest
from uqtraj.data.augmentation import MIN_NOISE_STD, augment_with_kf, domain_randomize, measurement_noise_std
from uqtraj.data.ingest import ingest
from uqtraj.data.records import FUTURE_STEPS, PAST_STEPS, SequencePair, normalize_pair, read_pairs, write_pairs
from uqtraj.data.split import split_pairs
from uqtraj.data.windowing import build_sequences
from uqtraj.kalman.filter import KfConfig, filter_trajectory, position_covariances
from uqtraj.metrics.evaluator import ForecastEvaluator, forecast_frame
from uqtraj.metrics.metrics import ade, fde
from uqtraj.net.config import NetConfig
from uqtraj.net.gradcheck import ALLOWED_TERMS, grad_check
from uqtraj.net.network import init_params, pairs_to_inputs, pairs_to_targets
from uqtraj.uq.models import MEMBER_FILE_PATTERN, DeepEnsemble, MCDropoutModel, ensemble_scaling
from uqtraj.utils.exceptions import (
    CheckpointMismatch,
    DegenerateEllipse,
    GradCheckFailure,
    IngestError,
    InvalidArgument,
    InvalidCovariance,
    NumericalFailure,
    NumericalOverflow,
    SingularInnovation,
)
from uqtraj.utils.warnings import DatasetCountWarning

EXIT_OK = 0
EXIT_INPUT_ERROR = 2
EXIT_NUMERIC_FAILURE = 3
EXIT_ARTIFACT_MISMATCH = 4

EXIT_CODES = [
    ((IngestError, InvalidArgument, FileNotFoundError), EXIT_INPUT_ERROR),
    (
        (
            NumericalOverflow,
            NumericalFailure,
            GradCheckFailure,
            SingularInnovation,
            InvalidCovariance,
            DegenerateEllipse,
        ),
        EXIT_NUMERIC_FAILURE,
    ),
    ((CheckpointMismatch,), EXIT_ARTIFACT_MISMATCH),
]

RAW_TRAIN_FILE = "raw_train.jsonl"
RAW_TEST_FILE = "raw_test.jsonl"
TRAIN_FILE = "train.jsonl"
TEST_FILE = "test.jsonl"
CHECKPOINT_DIR = "checkpoints"
DROPOUT_FILE = "dropout.json"


def _require_file(path, what="file"):
    if path is None or not os.path.isfile(path):
        raise InvalidArgument(f"{what} {path} does not exist")
    return path


def _csv(frame, path):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    frame.to_csv(path, index=False, float_format="%.10g")
    return path


def load_config(args):
    """
    Effective configuration: JSON file (if given), then `--set` assignments, then the explicit flags.
    """
    config = ExperimentConfig.from_json(args.config) if args.config else ExperimentConfig()
    config = config.with_assignments(args.set)
    overrides = {
        "seed": args.seed,
        "jobs": args.jobs,
        "verbose": args.verbose,
        "output_dir": args.out,
    }
    for key in [
        "dataset_path",
        "scene",
        "frame_stride",
        "noise_fractions",
        "method",
        "members",
        "mc_samples",
        "dropout_p",
        "epochs",
        "batch_size",
        "learning_rate",
        "sigma_scales",
        "forecast_dumps",
        "test_size",
        "split_seed",
    ]:
        overrides[key] = getattr(args, key, None)
    return ExperimentConfig.from_dict({**config.to_dict(), **{k: v for k, v in overrides.items() if v is not None}})


def cmd_ingest(args):
    """
    Reads annotations, cuts 8 + 12 windows and writes the raw train/test split.
    """
    config = load_config(args)
    path = config.dataset_path
    if path is None:
        raise InvalidArgument("ingest needs --data or dataset_path in the config")
    trajectories = ingest(path, frame_stride=config.frame_stride, dt=config.kf["dt"])
    pairs = build_sequences(trajectories)
    counts = count_check(config.scene, len(pairs))
    if counts["discrepancy"] and config.verbose > 0:
        warnings.warn(
            DatasetCountWarning(
                f"{config.scene} gave {counts['count']} sequences, the published count is {counts['expected']}"
            )
        )

    out = config.output_dir
    if len(pairs) >= 2:
        split = split_pairs(pairs, test_size=config.test_size, random_state=config.split_seed, name=config.scene)
        train, test = split.train, split.test
    else:
        train, test = pairs, []
    outputs = [os.path.join(out, RAW_TRAIN_FILE), os.path.join(out, RAW_TEST_FILE)]
    write_pairs(train, outputs[0])
    write_pairs(test, outputs[1])

    summary = {
        "scene": config.scene,
        "trajectories": len(trajectories),
        "trajectory_lengths": [len(t) for t in trajectories],
        "sequences": len(pairs),
        "n_train": len(train),
        "n_test": len(test),
        "expected_sequences": counts["expected"],
        "discrepancy": counts["discrepancy"],
    }
    write_manifest(
        out, "ingest", config, inputs=[path], outputs=outputs, seeds={"split_seed": config.split_seed}, extra=summary
    )
    print(
        f"{config.scene}: {summary['trajectories']} trajectories, {summary['sequences']} sequences "
        f"({summary['n_train']} train / {summary['n_test']} test)"
    )
    if counts["expected"] is not None:
        print(f"published count {counts['expected']}, discrepancy {counts['discrepancy']}")
    return summary


def cmd_augment(args):
    """
    Kalman augmentation of the raw split: sampled variants over all noise fractions for training, one posterior-mean
    variant at the first noise fraction for testing. Pairs are normalized to start at the origin.
    """
    config = load_config(args)
    split_dir = args.split_dir or config.output_dir
    train_path = _require_file(os.path.join(split_dir, RAW_TRAIN_FILE), "Raw train split")
    test_path = _require_file(os.path.join(split_dir, RAW_TEST_FILE), "Raw test split")
    raw_train, raw_test = read_pairs(train_path), read_pairs(test_path)
    if len(raw_train) == 0:
        raise InvalidArgument(f"{train_path} holds no sequences")

    kf_cfg, cts_cfg = config.kf_config(), config.cts_config()
    train = domain_randomize(
        raw_train,
        config.noise_fractions,
        kf_cfg=kf_cfg,
        cts_cfg=cts_cfg,
        rng=config.seed,
        n_jobs=config.jobs,
        verbose=config.verbose,
    )
    test = []
    if raw_test:
        test = augment_with_kf(
            raw_test,
            config.noise_fractions[0],
            kf_cfg=kf_cfg,
            cts_cfg=cts_cfg,
            rng=config.seed + 1,
            sample=False,
            n_jobs=config.jobs,
            verbose=config.verbose,
        )

    out = config.output_dir
    outputs = [os.path.join(out, TRAIN_FILE), os.path.join(out, TEST_FILE)]
    write_pairs([normalize_pair(p) for p in train], outputs[0])
    write_pairs([normalize_pair(p) for p in test], outputs[1])
    summary = {"n_train": len(train), "n_test": len(test), "noise_fractions": config.noise_fractions}
    write_manifest(
        out,
        "augment",
        config,
        inputs=[train_path, test_path],
        outputs=outputs,
        seeds={"train_seed": config.seed, "test_seed": config.seed + 1},
        extra=summary,
    )
    print(f"augmented {len(raw_train)} -> {len(train)} training and {len(raw_test)} -> {len(test)} test sequences")
    return summary


def _load_model(config, checkpoint_dir):
    if not os.path.isdir(checkpoint_dir):
        raise InvalidArgument(f"Checkpoint directory {checkpoint_dir} does not exist")
    expected = config.net_config() if config.net else None
    if os.path.isfile(os.path.join(checkpoint_dir, DROPOUT_FILE)) and config.method == "dropout":
        model = MCDropoutModel.load(checkpoint_dir, net_config=expected, verbose=config.verbose)
        model.n_samples = config.mc_samples
        return model
    if config.method == "dropout":
        raise CheckpointMismatch(f"No dropout checkpoint in {checkpoint_dir}")
    if not os.path.isfile(os.path.join(checkpoint_dir, MEMBER_FILE_PATTERN.format(index=0))):
        raise CheckpointMismatch(f"No ensemble checkpoints in {checkpoint_dir}")
    return DeepEnsemble.load(checkpoint_dir, net_config=expected, verbose=config.verbose)


def cmd_train(args):
    """
    Trains the ensemble members or the dropout model and writes checkpoints and loss histories.
    """
    config = load_config(args)
    data_dir = args.data_dir or config.output_dir
    train_path = _require_file(os.path.join(data_dir, TRAIN_FILE), "Augmented train split")
    pairs = read_pairs(train_path)
    cfg = config.net_config()
    out = config.output_dir
    checkpoint_dir = os.path.join(out, CHECKPOINT_DIR)

    if config.method == "ensemble":
        model = DeepEnsemble(
            n_members=config.members,
            net_config=cfg,
            epochs=config.epochs,
            batch_size=config.batch_size,
            learning_rate=config.learning_rate,
            n_jobs=config.jobs,
            verbose=config.verbose,
            random_state=config.seed,
        ).fit(pairs)
        history = model.history
        seeds = {"seed": config.seed, "member_seeds": model.seeds}
    else:
        model = MCDropoutModel(
            net_config=cfg,
            dropout_p=config.dropout_p,
            n_samples=config.mc_samples,
            epochs=config.epochs,
            batch_size=config.batch_size,
            learning_rate=config.learning_rate,
            verbose=config.verbose,
            random_state=config.seed,
        ).fit(pairs)
        history = model.history.assign(member=0)
        seeds = {"seed": config.seed, "train_seed": model.train_seed, "inference_seed": model.inference_seed}

    saved = model.save(checkpoint_dir)
    outputs = saved if isinstance(saved, list) else [saved]
    n_checkpoints = len(outputs)
    outputs.append(_csv(history, os.path.join(out, "loss_history.csv")))
    inputs = [train_path]

    if args.scaling:
        test_path = _require_file(os.path.join(data_dir, TEST_FILE), "Augmented test split")
        inputs.append(test_path)
        counts = [int(c) for c in args.scaling.split(",")]
        scaling = ensemble_scaling(
            pairs,
            read_pairs(test_path),
            member_counts=counts,
            net_config=replace(cfg, dropout_p=0.0),
            epochs=config.epochs,
            batch_size=config.batch_size,
            learning_rate=config.learning_rate,
            n_jobs=config.jobs,
            verbose=config.verbose,
            random_state=config.seed,
        )
        outputs.append(_csv(scaling, os.path.join(out, "scaling.csv")))
        print(scaling.to_string(index=False))

    write_manifest(out, "train", config, inputs=inputs, outputs=outputs, seeds=seeds, extra={"n_pairs": len(pairs)})
    print(f"trained {n_checkpoints} checkpoint(s) on {len(pairs)} pairs into {checkpoint_dir}")
    return model


def cmd_evaluate(args):
    """
    Metrics of the test split in all uncertainty modes and sigma multipliers, plus forecast dumps.
    """
    config = load_config(args)
    data_dir = args.data_dir or config.output_dir
    test_path = _require_file(os.path.join(data_dir, TEST_FILE), "Augmented test split")
    pairs = read_pairs(test_path)
    if len(pairs) == 0:
        raise InvalidArgument(f"{test_path} holds no sequences")
    checkpoint_dir = args.checkpoints or os.path.join(config.output_dir, CHECKPOINT_DIR)
    model = _load_model(config, checkpoint_dir)

    summary = model.compute(pairs)
    truth, _ = pairs_to_targets(pairs)
    observed = np.asarray([p.past_positions for p in pairs])
    evaluator = ForecastEvaluator(scales=config.sigma_scales, verbose=config.verbose)
    report = evaluator.fit_compute(summary, truth, observed=observed)

    out = config.output_dir
    outputs = [_csv(report, os.path.join(out, "metrics.csv"))]
    records_path = os.path.join(out, "metrics.jsonl")
    with open(records_path, "w", encoding="utf-8") as f:
        for metric_report in evaluator.reports:
            f.write(metric_report.to_json() + "\n")
    outputs.append(records_path)

    for index in range(min(config.forecast_dumps, len(pairs))):
        frame = forecast_frame(
            summary,
            index=index,
            truth=truth[index],
            observed=observed[index],
            observed_cov=pairs[index].past_cov,
            origin=pairs[index].origin,
        )
        outputs.append(_csv(frame, os.path.join(out, "forecasts", f"forecast_{index:04d}.csv")))

    checkpoints = sorted(
        os.path.join(checkpoint_dir, name) for name in os.listdir(checkpoint_dir) if name.endswith(".json")
    )
    write_manifest(
        out,
        "evaluate",
        config,
        inputs=[test_path, *checkpoints],
        outputs=outputs,
        extra={"n_sequences": len(pairs), "method": config.method},
    )
    print(report[["uncertainty_mode", "sigma_scale", "ade", "fde", "picp", "mpiw"]].to_string(index=False))
    return report


def observed_pair(traj, noise_fraction, kf_cfg):
    """
    Network input of an external trajectory: the first 8 positions are filtered as measurements, the following (up
    to 12) positions are kept as ground truth.

    Args:
        traj (Trajectory): Trajectory with at least 8 steps.
        noise_fraction (float): Assumed measurement noise fraction.
        kf_cfg (KfConfig): Filter settings.

    Returns:
        (SequencePair): Normalized pair whose future may hold fewer than 12 states.
    """
    if len(traj) < PAST_STEPS:
        raise InvalidArgument(f"Trajectory of pedestrian {traj.ped_id} has {len(traj)} steps, at least 8 are needed")
    positions = traj.positions
    states = np.hstack([positions, traj.velocities])
    sigma = max(measurement_noise_std(positions[:PAST_STEPS], noise_fraction), MIN_NOISE_STD)
    cfg = KfConfig.from_noise_std(sigma, dt=kf_cfg.dt, q_scale=kf_cfg.q_scale, velocity_var=float(kf_cfg.P0[2, 2]))
    post = filter_trajectory(positions[:PAST_STEPS], cfg)
    pair = SequencePair(
        past=post.means,
        future=states[PAST_STEPS : PAST_STEPS + FUTURE_STEPS],
        past_cov=position_covariances(post),
        ped_id=traj.ped_id,
    )
    return normalize_pair(pair)


def cmd_ood_predict(args):
    """
    Inference on external trajectory files. One forecast dump per scenario and a summary with epistemic traces and,
    for complete 20-step trajectories, ADE and FDE.
    """
    config = load_config(args)
    checkpoint_dir = args.checkpoints or os.path.join(config.output_dir, CHECKPOINT_DIR)
    model = _load_model(config, checkpoint_dir)
    for path in args.trajectories:
        _require_file(path, "Trajectory file")

    out = config.output_dir
    outputs, rows = [], []
    for path in args.trajectories:
        scenario = os.path.splitext(os.path.basename(path))[0]
        trajectories = ingest(path, frame_stride=config.frame_stride, dt=config.kf["dt"])
        if not trajectories:
            raise InvalidArgument(f"Trajectory file {path} holds no trajectory")
        pair = observed_pair(trajectories[0], config.noise_fractions[0], config.kf_config())
        summary = model.compute(pairs_to_inputs([pair]))

        n_future = len(pair.future)
        truth = np.full((FUTURE_STEPS, 2), np.nan)
        truth[:n_future] = pair.future_positions
        frame = forecast_frame(
            summary, truth=truth, observed=pair.past_positions, observed_cov=pair.past_cov, origin=pair.origin
        )
        outputs.append(_csv(frame, os.path.join(out, "ood", f"{scenario}.csv")))

        row = {
            "scenario": scenario,
            "n_steps": PAST_STEPS + n_future,
            "epistemic_trace_mean": float(summary.epistemic_trace.mean()),
            "epistemic_trace_final": float(summary.epistemic_trace[0, -1]),
            "aleatoric_trace_mean": float(summary.aleatoric_trace.mean()),
            "ade": np.nan,
            "fde": np.nan,
        }
        if n_future == FUTURE_STEPS:
            row["ade"] = ade(summary.mean[0], truth)
            row["fde"] = fde(summary.mean[0], truth)
        rows.append(row)

    table = pd.DataFrame(rows)
    outputs.append(_csv(table, os.path.join(out, "ood_summary.csv")))
    checkpoints = sorted(
        os.path.join(checkpoint_dir, name) for name in os.listdir(checkpoint_dir) if name.endswith(".json")
    )
    write_manifest(out, "ood-predict", config, inputs=[*args.trajectories, *checkpoints], outputs=outputs)
    print(table.to_string(index=False))
    return table


def _synthetic_pairs(n, seed):
    rng = np.random.default_rng(seed)
    t = np.arange(PAST_STEPS + FUTURE_STEPS) * 0.4
    pairs = []
    for _ in range(n):
        velocity = rng.normal(0.0, 1.0, size=2)
        positions = t[:, None] * velocity + rng.normal(0.0, 0.05, size=(len(t), 2))
        states = np.hstack([positions, np.tile(velocity, (len(t), 1))])
        variances = rng.uniform(0.01, 0.1, size=(len(t), 1))
        covs = np.hstack([variances, 0.2 * variances, variances])
        pair = SequencePair(
            past=states[:PAST_STEPS],
            future=states[PAST_STEPS:],
            past_cov=covs[:PAST_STEPS],
            future_cov=covs[PAST_STEPS:],
        )
        pairs.append(normalize_pair(pair))
    return pairs


def cmd_grad_check(args):
    """
    Finite-difference check of the backpropagated gradients of a small network.
    """
    config = load_config(args)
    cfg = NetConfig.from_dict(config.net) if config.net else NetConfig.small()
    if args.data_dir:
        pairs = read_pairs(_require_file(os.path.join(args.data_dir, TRAIN_FILE), "Augmented train split"))
        pairs = pairs[: args.batch]
    else:
        pairs = _synthetic_pairs(args.batch, config.seed)
    params = init_params(cfg, seed=config.seed)
    report = grad_check(params, cfg, pairs, tolerance=args.tolerance, terms=args.terms, seed=config.seed)

    out = config.output_dir
    os.makedirs(out, exist_ok=True)
    path = os.path.join(out, "gradcheck.json")
    with open(path, "w", encoding="utf-8") as f:
        json.dump({**asdict(report), "passed": report.passed}, f, indent=2, sort_keys=True)
    write_manifest(out, "grad-check", config, outputs=[path], extra={"n_pairs": len(pairs)})
    print(
        f"max relative error {report.max_relative_error:.3e} at {report.worst_parameter} "
        f"over {report.n_parameters} parameters (tolerance {report.tolerance:g}): passed"
    )
    return report


def _add_common(parser):
    parser.add_argument("--config", help="JSON experiment config.")
    parser.add_argument("--set", action="append", metavar="KEY=VALUE", help="Override a config key, e.g. net.beta=0.3.")
    parser.add_argument("--out", help="Output directory.")
    parser.add_argument("--seed", type=int, help="Global seed, defaults to UQTRAJ_SEED or 0.")
    parser.add_argument("--jobs", type=int, help="Parallel jobs.")
    parser.add_argument("--verbose", type=int, help="Verbosity of the library calls.")


def _add_training(parser):
    parser.add_argument("--method", choices=METHODS)
    parser.add_argument("--members", type=int)
    parser.add_argument("--mc-samples", dest="mc_samples", type=int)
    parser.add_argument("--dropout-p", dest="dropout_p", type=float)


def build_parser():
    """
    Argument parser of the `uqtraj` command.
    """
    parser = argparse.ArgumentParser(
        prog="uqtraj",
        description="Trajectory forecasting with sensing, prediction and total uncertainty.",
    )
    parser.add_argument("--version", action="version", version=f"uqtraj {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    ingest_parser = commands.add_parser("ingest", help="Window annotations and split them into train and test.")
    _add_common(ingest_parser)
    ingest_parser.add_argument("--data", dest="dataset_path", help="Annotation file with rows frame ped_id x y.")
    ingest_parser.add_argument("--scene")
    ingest_parser.add_argument("--frame-stride", dest="frame_stride", type=int)
    ingest_parser.add_argument("--test-size", dest="test_size", type=float)
    ingest_parser.add_argument("--split-seed", dest="split_seed", type=int)
    ingest_parser.set_defaults(handler=cmd_ingest)

    augment_parser = commands.add_parser("augment", help="Kalman augmentation of a raw split.")
    _add_common(augment_parser)
    augment_parser.add_argument("--split-dir", dest="split_dir", help="Directory written by ingest.")
    augment_parser.add_argument("--fractions", dest="noise_fractions", type=float, nargs="+")
    augment_parser.set_defaults(handler=cmd_augment)

    train_parser = commands.add_parser("train", help="Train an ensemble or a dropout model.")
    _add_common(train_parser)
    _add_training(train_parser)
    train_parser.add_argument("--data", dest="data_dir", help="Directory written by augment.")
    train_parser.add_argument("--epochs", type=int)
    train_parser.add_argument("--batch-size", dest="batch_size", type=int)
    train_parser.add_argument("--learning-rate", dest="learning_rate", type=float)
    train_parser.add_argument("--scaling", help="Comma separated ensemble sizes of a scalability study, e.g. 1,3,5.")
    train_parser.set_defaults(handler=cmd_train)

    evaluate_parser = commands.add_parser("evaluate", help="Metrics and forecast dumps of the test split.")
    _add_common(evaluate_parser)
    _add_training(evaluate_parser)
    evaluate_parser.add_argument("--data", dest="data_dir", help="Directory written by augment.")
    evaluate_parser.add_argument("--checkpoints", help="Directory with the checkpoints.")
    evaluate_parser.add_argument("--sigma-scales", dest="sigma_scales", type=float, nargs="+")
    evaluate_parser.add_argument("--dumps", dest="forecast_dumps", type=int, help="Number of forecast dumps.")
    evaluate_parser.set_defaults(handler=cmd_evaluate)

    ood_parser = commands.add_parser("ood-predict", help="Forecasts of external trajectory files.")
    _add_common(ood_parser)
    _add_training(ood_parser)
    ood_parser.add_argument("trajectories", nargs="+", help="Trajectory files with rows frame ped_id x y.")
    ood_parser.add_argument("--checkpoints", help="Directory with the checkpoints.")
    ood_parser.add_argument("--noise-fraction", dest="noise_fractions", type=float, nargs=1)
    ood_parser.set_defaults(handler=cmd_ood_predict)

    check_parser = commands.add_parser("grad-check", help="Finite-difference check of the gradients.")
    _add_common(check_parser)
    check_parser.add_argument("--data", dest="data_dir", help="Directory written by augment.")
    check_parser.add_argument("--terms", choices=ALLOWED_TERMS, default="joint")
    check_parser.add_argument("--tolerance", type=float, default=1e-4)
    check_parser.add_argument("--batch", type=int, default=4, help="Number of pairs in the checked batch.")
    check_parser.set_defaults(handler=cmd_grad_check)
    return parser


def main(argv=None):
    """
    Entry point of the `uqtraj` command.

    Returns:
        (int): 0 on success, 2 on input errors, 3 on numeric failures, 4 on checkpoint mismatches.
    """
    args = build_parser().parse_args(argv)
    try:
        args.handler(args)
    except Exception as error:
        for error_types, code in EXIT_CODES:
            if isinstance(error, error_types):
                message = getattr(error, "message", None) or str(error)
                print(f"uqtraj {args.command}: {type(error).__name__}: {message}", file=sys.stderr)
                return code
        raise
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
