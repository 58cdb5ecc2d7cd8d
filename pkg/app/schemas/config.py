import json
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.core.config import settings
from app.errors import ErrorMessages
from app.models.kernel import VIEW_ORDER, KernelKind, Modality, View
from app.models.metrics import RelevanceMode, RetrievalTask


class KernelFunctionSpec(BaseModel):
    """One kernel function: RBF with bandwidth ``sigma`` or polynomial ``(x.y + a)^s``."""

    model_config = ConfigDict(frozen=True)

    kind: KernelKind = KernelKind.RBF
    sigma: float = Field(1.0, gt=0)
    a: float = 1.0
    s: int = Field(5, ge=1)


RBF_DEFAULT = KernelFunctionSpec(kind=KernelKind.RBF)
POLYNOMIAL_DEFAULT = KernelFunctionSpec(kind=KernelKind.POLYNOMIAL)

# (histogram, mean, covariance) kernels of the eight named combination modes
COMBINATION_MODES: Dict[str, Tuple[KernelKind, KernelKind, KernelKind]] = {
    "mode1": (KernelKind.RBF, KernelKind.RBF, KernelKind.RBF),
    "mode2": (KernelKind.POLYNOMIAL, KernelKind.POLYNOMIAL, KernelKind.POLYNOMIAL),
    "mode3": (KernelKind.RBF, KernelKind.RBF, KernelKind.POLYNOMIAL),
    "mode4": (KernelKind.RBF, KernelKind.POLYNOMIAL, KernelKind.RBF),
    "mode5": (KernelKind.POLYNOMIAL, KernelKind.RBF, KernelKind.RBF),
    "mode6": (KernelKind.RBF, KernelKind.POLYNOMIAL, KernelKind.POLYNOMIAL),
    "mode7": (KernelKind.POLYNOMIAL, KernelKind.RBF, KernelKind.POLYNOMIAL),
    "mode8": (KernelKind.POLYNOMIAL, KernelKind.POLYNOMIAL, KernelKind.RBF),
}


class KernelCombination(BaseModel):
    """
    Per-view kernel choice for both modalities.

    Accepts either ``{"mode": "mode3"}`` (optionally with ``rbf``/``polynomial``
    parameter overrides) or explicit ``image``/``text`` lists of three specs.
    """

    model_config = ConfigDict(frozen=True)

    image: Tuple[KernelFunctionSpec, KernelFunctionSpec, KernelFunctionSpec] = (
        RBF_DEFAULT, RBF_DEFAULT, RBF_DEFAULT
    )
    text: Tuple[KernelFunctionSpec, KernelFunctionSpec, KernelFunctionSpec] = (
        RBF_DEFAULT, RBF_DEFAULT, RBF_DEFAULT
    )
    shared: bool = True

    @model_validator(mode="before")
    @classmethod
    def expand_mode(cls, data: Any) -> Any:
        if not isinstance(data, dict) or "mode" not in data:
            return data
        data = dict(data)
        mode = data.pop("mode")
        if mode not in COMBINATION_MODES:
            raise ValueError(ErrorMessages.Kernel.UNKNOWN_MODE.format(mode=mode))
        rbf = KernelFunctionSpec.model_validate(
            {**data.pop("rbf", {}), "kind": KernelKind.RBF}
        )
        polynomial = KernelFunctionSpec.model_validate(
            {**data.pop("polynomial", {}), "kind": KernelKind.POLYNOMIAL}
        )
        specs = tuple(rbf if kind is KernelKind.RBF else polynomial for kind in COMBINATION_MODES[mode])
        data.setdefault("image", specs)
        data.setdefault("text", specs)
        return data

    @model_validator(mode="after")
    def check_shared(self) -> "KernelCombination":
        if self.shared and self.image != self.text:
            raise ValueError(ErrorMessages.Kernel.UNSHARED_KERNELS)
        return self

    @classmethod
    def from_mode(
        cls,
        mode: str,
        rbf: Optional[KernelFunctionSpec] = None,
        polynomial: Optional[KernelFunctionSpec] = None,
    ) -> "KernelCombination":
        payload: Dict[str, Any] = {"mode": mode}
        if rbf is not None:
            payload["rbf"] = rbf.model_dump(exclude={"kind"})
        if polynomial is not None:
            payload["polynomial"] = polynomial.model_dump(exclude={"kind"})
        return cls.model_validate(payload)

    def for_modality(self, modality: Modality) -> Tuple[KernelFunctionSpec, ...]:
        return self.image if modality is Modality.IMAGE else self.text


class ViewWeights(BaseModel):
    """Weighting coefficients applied to each kernelized view block."""

    model_config = ConfigDict(frozen=True)

    image: Tuple[float, float, float] = (1.0, 1.0, 1.0)
    text: Tuple[float, float, float] = (1.0, 1.0, 1.0)

    def for_modality(self, modality: Modality) -> Tuple[float, float, float]:
        return self.image if modality is Modality.IMAGE else self.text


class AnchorConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    # None means min(n, MAX_ANCHORS_PER_VIEW)
    per_view: Tuple[Optional[int], Optional[int], Optional[int]] = (None, None, None)
    strategy: Literal["random", "kmeans"] = "random"

    @field_validator("per_view")
    @classmethod
    def positive_counts(cls, v: Tuple[Optional[int], ...]) -> Tuple[Optional[int], ...]:
        if any(count is not None and count < 1 for count in v):
            raise ValueError("anchor counts must be >= 1")
        return v

    def resolve(self, n: int, views: Tuple[View, ...]) -> Tuple[int, int, int]:
        """Anchor count per view for ``n`` training samples; disabled views get 0."""
        sizes = []
        for view, requested in zip(VIEW_ORDER, self.per_view):
            if view not in views:
                sizes.append(0)
            elif requested is None:
                sizes.append(min(n, settings.MAX_ANCHORS_PER_VIEW))
            else:
                sizes.append(requested)
        return tuple(sizes)  # type: ignore[return-value]


class KernelSettings(BaseModel):
    """Everything needed to kernelize a new sample the way training did."""

    model_config = ConfigDict(frozen=True)

    combination: KernelCombination = KernelCombination()
    weights: ViewWeights = ViewWeights()
    views: Tuple[View, ...] = VIEW_ORDER
    anchors: AnchorConfig = AnchorConfig()

    @field_validator("views")
    @classmethod
    def at_least_one_view(cls, v: Tuple[View, ...]) -> Tuple[View, ...]:
        if not v:
            raise ValueError(ErrorMessages.Kernel.NO_ACTIVE_VIEW)
        return tuple(view for view in VIEW_ORDER if view in v)


class TrainConfig(BaseModel):
    """Optimization hyperparameters."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    code_length: int = Field(32, ge=1, alias="L")
    alpha: float = Field(0.1, ge=0)
    beta: float = Field(0.1, ge=0)
    lam: float = Field(0.01, gt=0, alias="lambda")
    use_classifier: bool = True
    max_outer_iters: int = Field(50, ge=0)
    dcc_sweeps: int = Field(3, ge=1)
    tol_rel: float = Field(1e-5, gt=0)
    ridge: float = Field(0.0, ge=0)
    ridge_fallback: float = Field(default_factory=lambda: settings.RIDGE_FALLBACK, gt=0)
    seed: int = Field(default_factory=lambda: settings.DEFAULT_SEED)

    @model_validator(mode="after")
    def some_term_active(self) -> "TrainConfig":
        if not self.use_classifier and self.alpha == 0 and self.beta == 0:
            raise ValueError(ErrorMessages.Optimizer.NO_ACTIVE_TERM)
        return self


class DescriptorConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    k_img: int = Field(500, ge=1)
    k_txt: int = Field(100, ge=1)
    eps_spd: float = Field(default_factory=lambda: settings.EPS_SPD, ge=0)


class EvaluationConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    tasks: Tuple[RetrievalTask, ...] = (RetrievalTask.I2T, RetrievalTask.T2I)
    # None means the whole database
    top_r: Optional[int] = Field(None, ge=1)
    radii: Optional[List[int]] = None
    relevance: Optional[RelevanceMode] = None


class PathsConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    image_descriptors: Path
    text_descriptors: Path
    labels: Path
    output_dir: Path
    query_image_descriptors: Optional[Path] = None
    query_text_descriptors: Optional[Path] = None
    query_labels: Optional[Path] = None

    def resolved(self, base: Path) -> "PathsConfig":
        updates = {
            name: (base / value) for name, value in self.model_dump().items()
            if value is not None and not Path(value).is_absolute()
        }
        return self.model_copy(update=updates)

    def check_inputs(self) -> List[str]:
        required = [self.image_descriptors, self.text_descriptors, self.labels]
        optional = [self.query_image_descriptors, self.query_text_descriptors, self.query_labels]
        return [
            str(path) for path in required + [p for p in optional if p is not None]
            if not Path(path).exists()
        ]


class RunConfig(BaseModel):
    """The declarative run configuration read by the ``train`` command."""

    model_config = ConfigDict(frozen=True)

    paths: PathsConfig
    descriptors: DescriptorConfig = DescriptorConfig()
    kernel: KernelSettings = KernelSettings()
    train: TrainConfig = TrainConfig()
    evaluation: EvaluationConfig = EvaluationConfig()
    seed: int = Field(default_factory=lambda: settings.DEFAULT_SEED)

    def with_overrides(self, overrides: Dict[str, Any]) -> "RunConfig":
        """Apply command-line overrides (``seed``, ``top_r``, ``radii``)."""
        updated = self
        if overrides.get("seed") is not None:
            updated = updated.model_copy(update={"seed": overrides["seed"]})
        evaluation_updates = {
            key: overrides[key] for key in ("top_r", "radii") if overrides.get(key) is not None
        }
        if evaluation_updates:
            updated = updated.model_copy(
                update={"evaluation": updated.evaluation.model_copy(update=evaluation_updates)}
            )
        return updated

    def effective_train_config(self) -> TrainConfig:
        return self.train.model_copy(update={"seed": self.seed})


def config_echo(config_text: str, overrides: Dict[str, Any]) -> str:
    """Canonical echo of the input config text plus the applied overrides."""
    return json.dumps(
        {"config": config_text, "overrides": {k: v for k, v in sorted(overrides.items()) if v is not None}},
        sort_keys=True,
    )
