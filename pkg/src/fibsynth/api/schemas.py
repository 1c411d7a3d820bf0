"""Request and response models shared by the HTTP service and the CLI."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field, field_validator

U64_MAX = (1 << 64) - 1


def _check_eps(v: str) -> str:
    import mpmath

    try:
        x = mpmath.mpf(v)
    except (ValueError, TypeError) as exc:
        raise ValueError(f"epsilon {v!r} is not a number") from exc
    if not 0 < x < 1:
        raise ValueError("epsilon must lie strictly between 0 and 1")
    return v


class _Compile(BaseModel):
    eps: str = Field(description="target distance, as a decimal string so 1e-30 survives")
    seed: Optional[int] = Field(default=None, ge=0, le=U64_MAX)
    precision_bits: Optional[int] = Field(default=None, ge=64)
    peephole: bool = True
    max_trials: int = Field(default=10**6, ge=1)

    _eps = field_validator("eps")(classmethod(lambda cls, v: _check_eps(v)))


class RotationRequest(_Compile):
    kind: Literal["rz", "rzx"] = "rz"
    angle: str = Field(description="`pi/128`, `3pi/7` or a decimal")

    @field_validator("angle")
    @classmethod
    def _angle(cls, v: str) -> str:
        from ..approx import parse_angle

        parse_angle(v)
        return v


class UnitaryRequest(_Compile):
    matrix: list[list[str]] = Field(description="2x2 complex entries such as `0.6+0.8j`")

    @field_validator("matrix")
    @classmethod
    def _shape(cls, v: list[list[str]]) -> list[list[str]]:
        if len(v) != 2 or any(len(row) != 2 for row in v):
            raise ValueError("matrix must be 2x2")
        return v


class CompileResponse(BaseModel):
    target: str
    epsilon: str
    seed: int
    braid: str
    ft: str
    sigma_count: int
    distance: str
    trials: int
    elapsed_ms: int
    kind: str
    raw_sigma_count: int


class SynthesizeRequest(BaseModel):
    """Either an F/T word or the triple ``(u, v, k)``."""

    ft: Optional[str] = None
    u: Optional[str] = None
    v: Optional[str] = None
    k: int = 0


class SynthesizeResponse(BaseModel):
    exact: str
    ft: str
    braid: str
    sigma_count: int
    gauss_trace: list[int]


class SolveNormRequest(BaseModel):
    xi: str = Field(description="element of Z[tau], e.g. `760-780*t`")
    seed: Optional[int] = Field(default=None, ge=0, le=U64_MAX)


class SolveNormResponse(BaseModel):
    xi: str
    solved: bool
    x: Optional[str] = None
    factors: list[tuple[str, int]] = []


class VerifyRequest(BaseModel):
    braid: str
    kind: Literal["rz", "rzx", "unitary"] = "rz"
    angle: Optional[str] = None
    matrix: Optional[list[list[str]]] = None
    eps: Optional[str] = None
    precision_bits: int = Field(default=256, ge=64)


class VerifyResponse(BaseModel):
    distance: str
    sigma_count: int
    ok: Optional[bool] = None


class ExperimentRequest(BaseModel):
    kind: Literal["rz", "rzx"] = "rz"
    k_min: int = Field(default=1, ge=0)
    k_max: int = Field(default=10, ge=0)
    denominator: int = Field(default=4000, ge=1)
    epsilons: list[str] = ["1e-2", "1e-5", "1e-10"]
    repetitions: int = Field(default=1, ge=1)
    seed: int = Field(default=0, ge=0, le=U64_MAX)
    oracle_depth: Optional[int] = Field(default=12, ge=0)
    timing: bool = True
    workers: int = Field(default=1, ge=1)

    @field_validator("epsilons")
    @classmethod
    def _eps_list(cls, v: list[str]) -> list[str]:
        return [_check_eps(e) for e in v]


class ErrorResponse(BaseModel):
    error: str
    detail: str
