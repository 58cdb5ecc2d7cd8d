"""
Alternating optimization of the discrete hashing objective

    ||Y - W^T B||^2 + alpha ||B - P_img Psi||^2 + beta ||B - P_txt Phi||^2 + lambda ||W||^2

with closed-form updates for the projections and the classifier and discrete
cyclic coordinate descent (DCC) for the codes.
"""

import logging
import time
import warnings
from typing import Dict, Optional, Union

import numpy as np
import scipy.linalg
from scipy.linalg import LinAlgWarning

from app.errors import DimensionMismatchError, SingularSystemError
from app.models.kernel import Modality
from app.models.labels import LabelMatrix
from app.models.state import TrainState
from app.schemas.config import TrainConfig

logger = logging.getLogger(__name__)

LabelsLike = Union[LabelMatrix, np.ndarray]


def sgn(values: np.ndarray) -> np.ndarray:
    """Sign with sgn(0) = +1, as int8."""
    return np.where(values >= 0, 1, -1).astype(np.int8)


def _label_array(Y: LabelsLike) -> np.ndarray:
    return Y.Y if isinstance(Y, LabelMatrix) else np.atleast_2d(np.asarray(Y, dtype=np.float64))


def _check_shapes(
    B: np.ndarray,
    P_img: np.ndarray,
    P_txt: np.ndarray,
    W: np.ndarray,
    Y: np.ndarray,
    Psi: np.ndarray,
    Phi: np.ndarray,
) -> None:
    L, n = B.shape
    if Psi.shape[1] != n or Phi.shape[1] != n or Y.shape[1] != n:
        raise DimensionMismatchError("objective samples", n, (Psi.shape[1], Phi.shape[1], Y.shape[1]))
    if P_img.shape != (L, Psi.shape[0]):
        raise DimensionMismatchError("objective P_img", (L, Psi.shape[0]), P_img.shape)
    if P_txt.shape != (L, Phi.shape[0]):
        raise DimensionMismatchError("objective P_txt", (L, Phi.shape[0]), P_txt.shape)
    if W.shape != (L, Y.shape[0]):
        raise DimensionMismatchError("objective W", (L, Y.shape[0]), W.shape)


def objective_terms(
    B: np.ndarray,
    P_img: np.ndarray,
    P_txt: np.ndarray,
    W: np.ndarray,
    Y: LabelsLike,
    Psi: np.ndarray,
    Phi: np.ndarray,
    cfg: TrainConfig,
    ridge_img: float = 0.0,
    ridge_txt: float = 0.0,
) -> Dict[str, float]:
    """
    The four weighted terms of the objective.

    With ``use_classifier`` off the classification and regularization terms
    are reported as zero. A projection solved with a ridge adds its penalty
    as ``projection_ridge`` so the recorded objective is the one minimized.
    """
    Y = _label_array(Y)
    B = np.asarray(B, dtype=np.float64)
    _check_shapes(B, P_img, P_txt, W, Y, Psi, Phi)
    terms = {
        "classification": 0.0,
        "image_projection": cfg.alpha * float(np.sum((B - P_img @ Psi) ** 2)),
        "text_projection": cfg.beta * float(np.sum((B - P_txt @ Phi) ** 2)),
        "regularization": 0.0,
        "projection_ridge": (
            cfg.alpha * ridge_img * float(np.sum(P_img ** 2)) + cfg.beta * ridge_txt * float(np.sum(P_txt ** 2))
        ),
    }
    if cfg.use_classifier:
        terms["classification"] = float(np.sum((Y - W.T @ B) ** 2))
        terms["regularization"] = cfg.lam * float(np.sum(W ** 2))
    return terms


def objective(state: TrainState, Y: LabelsLike, Psi: np.ndarray, Phi: np.ndarray, cfg: TrainConfig) -> float:
    return sum(objective_terms(state.B, state.P_img, state.P_txt, state.W, Y, Psi, Phi, cfg).values())


def update_p(B: np.ndarray, K: np.ndarray, ridge_eps: float = 0.0) -> np.ndarray:
    """
    Least-squares projection P = B K^T (K K^T + ridge_eps I)^{-1}, shape (L, D).

    Raises ``SingularSystemError`` when the Gram matrix cannot be factorized
    or, without a ridge, is too ill-conditioned to trust.
    """
    B = np.asarray(B, dtype=np.float64)
    if K.shape[1] != B.shape[1]:
        raise DimensionMismatchError("update_p", B.shape[1], K.shape[1])
    gram = K @ K.T
    if ridge_eps:
        gram[np.diag_indices_from(gram)] += ridge_eps

    with warnings.catch_warnings():
        warnings.simplefilter("error" if ridge_eps == 0 else "ignore", LinAlgWarning)
        try:
            P_t = scipy.linalg.solve(gram, K @ B.T, assume_a="pos")
        except (np.linalg.LinAlgError, LinAlgWarning) as exc:
            raise SingularSystemError("update_p", exc) from exc
    if not np.all(np.isfinite(P_t)):
        raise SingularSystemError("update_p")
    return P_t.T


def update_w(B: np.ndarray, Y: LabelsLike, lam: float) -> np.ndarray:
    """Ridge classifier W = (B B^T + lambda I)^{-1} B Y^T, shape (L, c)."""
    B = np.asarray(B, dtype=np.float64)
    Y = _label_array(Y)
    if Y.shape[1] != B.shape[1]:
        raise DimensionMismatchError("update_w", B.shape[1], Y.shape[1])
    system = B @ B.T + lam * np.eye(B.shape[0])
    try:
        return scipy.linalg.solve(system, B @ Y.T, assume_a="pos")
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError("update_w", exc) from exc


def code_target(
    P_img: np.ndarray,
    P_txt: np.ndarray,
    W: np.ndarray,
    Y: LabelsLike,
    Psi: np.ndarray,
    Phi: np.ndarray,
    cfg: TrainConfig,
) -> np.ndarray:
    """Q = W Y + alpha P_img Psi + beta P_txt Phi; the linear term of the code subproblem."""
    Q = cfg.alpha * (P_img @ Psi) + cfg.beta * (P_txt @ Phi)
    if cfg.use_classifier:
        Q = Q + W @ _label_array(Y)
    return Q


def dcc_sweep(B: np.ndarray, Q: np.ndarray, W: np.ndarray) -> np.ndarray:
    """
    One cyclic pass over the rows of B.

    Row l becomes z = sgn(q - B~^T W~ u), where B~ and W~ drop row l and u is
    row l of W. Returns a new array.
    """
    B = B.copy()
    for row in range(B.shape[0]):
        others_B = np.delete(B, row, axis=0).astype(np.float64)
        others_W = np.delete(W, row, axis=0)
        coupling = others_B.T @ (others_W @ W[row])
        B[row] = sgn(Q[row] - coupling)
    return B


def update_b_dcc(
    state: TrainState,
    Y: LabelsLike,
    Psi: np.ndarray,
    Phi: np.ndarray,
    cfg: TrainConfig,
) -> np.ndarray:
    """Up to ``cfg.dcc_sweeps`` DCC sweeps; stops early once a sweep changes nothing."""
    W = state.W if cfg.use_classifier else np.zeros_like(state.W)
    Q = code_target(state.P_img, state.P_txt, W, Y, Psi, Phi, cfg)
    B = state.B
    for sweep in range(cfg.dcc_sweeps):
        updated = dcc_sweep(B, Q, W)
        if np.array_equal(updated, B):
            logger.debug("DCC reached a fixed point", extra={"sweep": sweep})
            return updated
        B = updated
    return B


class HashingTrainer:
    """
    Runs the alternating optimization for one configuration.

    The Gram matrices K K^T never change during training, so whether a
    modality needs the ridge fallback is settled by its first projection
    update and kept from then on.
    """

    def __init__(self, cfg: TrainConfig):
        self.cfg = cfg
        self.ridge: Dict[Modality, float] = {Modality.IMAGE: cfg.ridge, Modality.TEXT: cfg.ridge}

    def _update_p(self, B: np.ndarray, K: np.ndarray, modality: Modality) -> np.ndarray:
        try:
            return update_p(B, K, self.ridge[modality])
        except SingularSystemError:
            if self.ridge[modality] >= self.cfg.ridge_fallback:
                raise
            logger.warning("Gram matrix is singular, retrying with a ridge", extra={
                "modality": modality.value, "ridge": self.cfg.ridge_fallback,
            })
            self.ridge[modality] = self.cfg.ridge_fallback
            return update_p(B, K, self.ridge[modality])

    def _update_w(self, B: np.ndarray, Y: np.ndarray) -> np.ndarray:
        if not self.cfg.use_classifier:
            return np.zeros((B.shape[0], Y.shape[0]))
        return update_w(B, Y, self.cfg.lam)

    def _closed_forms(self, B: np.ndarray, Y: np.ndarray, Psi: np.ndarray, Phi: np.ndarray) -> TrainState:
        return TrainState(
            B=B,
            P_img=self._update_p(B, Psi, Modality.IMAGE),
            P_txt=self._update_p(B, Phi, Modality.TEXT),
            W=self._update_w(B, Y),
        )

    def terms(self, state: TrainState, Y: LabelsLike, Psi: np.ndarray, Phi: np.ndarray) -> Dict[str, float]:
        return objective_terms(
            state.B, state.P_img, state.P_txt, state.W, Y, Psi, Phi, self.cfg,
            ridge_img=self.ridge[Modality.IMAGE], ridge_txt=self.ridge[Modality.TEXT],
        )

    def _objective(self, state: TrainState, Y: np.ndarray, Psi: np.ndarray, Phi: np.ndarray) -> float:
        return sum(self.terms(state, Y, Psi, Phi).values())

    def initial_codes(self, Psi: np.ndarray, Phi: np.ndarray) -> np.ndarray:
        """
        Seeded random-hyperplane signs of the stacked kernel features.

        Every column depends only on its own sample, so reordering samples
        reorders the initial codes the same way.
        """
        rng = np.random.default_rng(self.cfg.seed)
        L = self.cfg.code_length
        G_img = rng.standard_normal((L, Psi.shape[0]))
        G_txt = rng.standard_normal((L, Phi.shape[0]))
        return sgn(G_img @ Psi + G_txt @ Phi)

    def train(self, Psi: np.ndarray, Phi: np.ndarray, Y: LabelsLike) -> TrainState:
        cfg = self.cfg
        Y = _label_array(Y)
        n = Y.shape[1]
        if Psi.shape[1] != n or Phi.shape[1] != n:
            raise DimensionMismatchError("train", n, (Psi.shape[1], Phi.shape[1]))

        started = time.perf_counter()
        converged = False
        state = self._closed_forms(self.initial_codes(Psi, Phi), Y, Psi, Phi)
        trace = [self._objective(state, Y, Psi, Phi)]
        logger.info("Training started", extra={
            "n": n, "L": cfg.code_length, "D_img": Psi.shape[0], "D_txt": Phi.shape[0],
            "objective": trace[0],
        })

        for iteration in range(1, cfg.max_outer_iters + 1):
            state = self._closed_forms(state.B, Y, Psi, Phi)
            B = update_b_dcc(state, Y, Psi, Phi, cfg)
            state = TrainState(B=B, P_img=state.P_img, P_txt=state.P_txt, W=state.W)
            trace.append(self._objective(state, Y, Psi, Phi))

            previous, current = trace[-2], trace[-1]
            change = abs(previous - current) / max(abs(previous), np.finfo(float).tiny)
            logger.info("Outer iteration", extra={
                "iteration": iteration, "objective": current, "relative_change": change,
            })
            if change < cfg.tol_rel:
                converged = True
                break

        wall_time = time.perf_counter() - started
        logger.info("Training finished", extra={
            "iterations": len(trace) - 1, "objective": trace[-1], "wall_time": round(wall_time, 4),
        })
        return TrainState(
            B=state.B,
            P_img=state.P_img,
            P_txt=state.P_txt,
            W=state.W,
            objective_trace=tuple(trace),
            wall_time=wall_time,
            converged=converged,
        )


def train(
    Psi: np.ndarray,
    Phi: np.ndarray,
    Y: LabelsLike,
    cfg: Optional[TrainConfig] = None,
) -> TrainState:
    return HashingTrainer(cfg or TrainConfig()).train(Psi, Phi, Y)
