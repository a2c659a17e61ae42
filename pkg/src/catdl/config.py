# ♥♥─── Catdl Settings ─────────────────────────────────────
from __future__ import annotations

from typing import Any

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

from .data_models import RunConfig


class ReasonerSettings(BaseSettings):
    """Process-wide defaults, read from ``CATDL_*`` environment variables."""

    model_config = SettingsConfigDict(env_prefix="CATDL_", extra="ignore")

    budget_steps: int = Field(default=10_000_000, gt=0)
    budget_nodes: int = Field(default=1_000_000, gt=0)
    jobs: int = Field(default=1, ge=1)

    def run_config(
        self,
        *,
        budget_steps: int | None = None,
        budget_nodes: int | None = None,
        **knobs: Any,
    ) -> RunConfig:
        """Per-command configuration; explicit budgets win over the environment."""
        return RunConfig(
            budget_steps=budget_steps or self.budget_steps,
            budget_nodes=budget_nodes or self.budget_nodes,
            **knobs,
        )
