import json
import os
from dataclasses import asdict, dataclass, field, fields, replace
from typing import List, Optional

from uqtraj.core.types import STEP_SECONDS
from uqtraj.data.split import DEFAULT_TEST_SIZE, SCENES
from uqtraj.kalman.filter import KfConfig
from uqtraj.net.config import NetConfig
from uqtraj.sampling.cts import CtsConfig
from uqtraj.utils.exceptions import InvalidArgument

SEED_ENV_VAR = "UQTRAJ_SEED"
METHODS = ["ensemble", "dropout"]
KF_KEYS = ["dt", "q_scale", "velocity_var"]
CTS_KEYS = ["m", "lam", "dynamics"]


def default_seed():
    """
    Global seed default: the value of UQTRAJ_SEED, 0 if unset.
    """
    value = os.environ.get(SEED_ENV_VAR)
    if value is None or value == "":
        return 0
    try:
        return int(value)
    except ValueError as error:
        raise InvalidArgument(f"{SEED_ENV_VAR} needs to be an integer, got {value!r}") from error


@dataclass
class ExperimentConfig:
    """
    Settings of one experiment, read from a JSON file and overridable from the command line.

    Attributes:
        dataset_path (str, optional): Annotation file with rows `frame ped_id x y`.
        scene (str): Scene label, one of ETH, HOTEL, UNIV, ZARA1 and ZARA2.
        frame_stride (int): Keep every n-th annotated frame of a pedestrian, counted in base frame steps.
        noise_fractions (list of float): Measurement noise fractions used for augmentation.
        test_size (float): Fraction of sequences in the test split.
        split_seed (int): Seed of the train/test split.
        kf (dict): Filter settings with keys dt, q_scale and velocity_var.
        cts (dict): Sampler settings with keys m, lam and dynamics.
        net (dict): Keyword arguments of NetConfig.
        method (str): `'ensemble'` or `'dropout'`.
        members (int): Ensemble size.
        mc_samples (int): Forward passes of MC dropout.
        dropout_p (float): Dropout rate of the dropout model.
        epochs (int): Training epochs.
        batch_size (int): Pairs per update.
        learning_rate (float): Adam step size.
        sigma_scales (list of float): Sigma multipliers reported by `evaluate`.
        forecast_dumps (int): Number of test sequences dumped as forecast files.
        seed (int): Global seed. Defaults to UQTRAJ_SEED.
        output_dir (str): Directory of the outputs.
        jobs (int): Parallel jobs.
        verbose (int): Verbosity of the library calls.
    """

    dataset_path: Optional[str] = None
    scene: str = "HOTEL"
    frame_stride: int = 1
    noise_fractions: List[float] = field(default_factory=lambda: [0.05])
    test_size: float = DEFAULT_TEST_SIZE
    split_seed: int = 42
    kf: dict = field(default_factory=lambda: {"dt": STEP_SECONDS, "q_scale": 0.05, "velocity_var": 1.0})
    cts: dict = field(default_factory=lambda: {"m": 3, "lam": 0.9, "dynamics": "constant_velocity"})
    net: dict = field(default_factory=dict)
    method: str = "ensemble"
    members: int = 3
    mc_samples: int = 50
    dropout_p: float = 0.5
    epochs: int = 150
    batch_size: int = 64
    learning_rate: float = 1e-3
    sigma_scales: List[float] = field(default_factory=lambda: [1.0, 2.0])
    forecast_dumps: int = 5
    seed: int = field(default_factory=default_seed)
    output_dir: str = "runs"
    jobs: int = 1
    verbose: int = 0

    def __post_init__(self):
        """
        Validates the settings.
        """
        if self.scene not in SCENES:
            raise InvalidArgument(f"scene needs to be one of {SCENES}, got {self.scene}")
        if self.method not in METHODS:
            raise InvalidArgument(f"method needs to be one of {METHODS}, got {self.method}")
        if self.frame_stride < 1:
            raise InvalidArgument(f"frame_stride needs to be positive, got {self.frame_stride}")
        if self.members < 1:
            raise InvalidArgument(f"members needs to be positive, got {self.members}")
        if not self.noise_fractions:
            raise InvalidArgument("noise_fractions needs at least one value")
        for name, value, allowed in [("kf", self.kf, KF_KEYS), ("cts", self.cts, CTS_KEYS)]:
            unknown = set(value) - set(allowed)
            if unknown:
                raise InvalidArgument(f"Unknown {name} keys {sorted(unknown)}, allowed: {allowed}")

    @classmethod
    def from_dict(cls, values):
        """
        Builds a config from a dict, rejecting unknown keys.
        """
        known = {f.name for f in fields(cls)}
        unknown = set(values) - known
        if unknown:
            raise InvalidArgument(f"Unknown config keys {sorted(unknown)}")
        defaults = cls()
        merged = {}
        for key, value in values.items():
            if key in ("kf", "cts"):
                value = {**getattr(defaults, key), **value}
            merged[key] = value
        return replace(defaults, **merged)

    @classmethod
    def from_json(cls, path):
        """
        Reads a config file.
        """
        if not os.path.isfile(path):
            raise InvalidArgument(f"Config file {path} does not exist")
        with open(path, "r", encoding="utf-8") as f:
            try:
                values = json.load(f)
            except json.JSONDecodeError as error:
                raise InvalidArgument(f"Config file {path} is not valid JSON: {error}") from error
        return cls.from_dict(values)

    def to_dict(self):
        """
        (dict): JSON serializable echo of the config.
        """
        return asdict(self)

    def to_json(self, path):
        """
        Writes the config to `path`.
        """
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            json.dump(self.to_dict(), f, indent=2, sort_keys=True)

    def with_overrides(self, **overrides):
        """
        Copy with the given keys replaced. None values are ignored.
        """
        values = {key: value for key, value in overrides.items() if value is not None}
        return replace(self, **values) if values else self

    def with_assignments(self, assignments):
        """
        Copy with `key=value` assignments applied. Values are parsed as JSON, falling back to strings. Dotted keys
        address the nested kf, cts and net settings, e.g. `net.beta=0.3`.
        """
        values = self.to_dict()
        for assignment in assignments or []:
            if "=" not in assignment:
                raise InvalidArgument(f"Assignment {assignment!r} needs the form key=value")
            key, raw = assignment.split("=", 1)
            try:
                value = json.loads(raw)
            except json.JSONDecodeError:
                value = raw
            if "." in key:
                section, name = key.split(".", 1)
                if section not in ("kf", "cts", "net"):
                    raise InvalidArgument(f"Unknown config section {section!r}")
                values[section] = {**values[section], name: value}
            else:
                values[key] = value
        return ExperimentConfig.from_dict(values)

    def kf_config(self):
        """
        (KfConfig): Filter settings. Measurement noise is set per track during augmentation.
        """
        return KfConfig.from_noise_std(
            1.0, dt=self.kf["dt"], q_scale=self.kf["q_scale"], velocity_var=self.kf["velocity_var"]
        )

    def cts_config(self):
        """
        (CtsConfig): Sampler settings with the global seed.
        """
        return CtsConfig(
            m=self.cts["m"],
            lam=self.cts["lam"],
            dynamics=self.cts["dynamics"],
            rng_seed=self.seed,
            dt=self.kf["dt"],
        )

    def net_config(self):
        """
        (NetConfig): Architecture. The dropout model uses `dropout_p`, ensemble members none.
        """
        cfg = NetConfig.from_dict(self.net) if self.net else NetConfig()
        dropout_p = self.dropout_p if self.method == "dropout" else 0.0
        return replace(cfg, dropout_p=dropout_p)
