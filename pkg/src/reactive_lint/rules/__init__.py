"""Rule engine: each rule is a function of one component model."""
from __future__ import annotations

from typing import Callable, Iterable, Optional

from ..catalog import (
    NO_ASYNC_WITHOUT_ONPUSH,
    NO_IMPERATIVE_IN_REACTIVE,
    NO_IMPLICIT_SUBSCRIPTIONS,
    NO_UNUSED_OBSERVABLES,
    PREFER_SIGNAL,
    USE_TAKEUNTILDESTROYED,
)
from ..diagnostics import Diagnostic, Severity
from ..semantic import ComponentModel
from ..workspace import RuleConfig
from .fields import rule_no_async_without_onpush, rule_no_unused_observables, rule_prefer_signal
from .subscriptions import (
    rule_no_imperative_in_reactive,
    rule_no_implicit_subscriptions,
    rule_use_takeuntildestroyed,
)

RuleFn = Callable[[ComponentModel, Severity], list[Diagnostic]]

RULE_FUNCTIONS: dict[str, RuleFn] = {
    NO_IMPLICIT_SUBSCRIPTIONS: rule_no_implicit_subscriptions,
    NO_ASYNC_WITHOUT_ONPUSH: rule_no_async_without_onpush,
    PREFER_SIGNAL: rule_prefer_signal,
    NO_UNUSED_OBSERVABLES: rule_no_unused_observables,
    USE_TAKEUNTILDESTROYED: rule_use_takeuntildestroyed,
    NO_IMPERATIVE_IN_REACTIVE: rule_no_imperative_in_reactive,
}

LINTED_KINDS = frozenset(("component", "directive"))


def run_rules(
    models: Iterable[ComponentModel],
    config: Optional[RuleConfig] = None,
    config_for: Optional[Callable[[str], RuleConfig]] = None,
) -> list[Diagnostic]:
    """Diagnostics of every enabled rule over `models`, in canonical order.

    `config_for` maps a file path to its effective configuration and takes
    precedence over `config` when given.
    """
    base = config or RuleConfig.defaults()
    out: list[Diagnostic] = []
    for model in models:
        if model.kind not in LINTED_KINDS:
            continue
        cfg = config_for(model.path) if config_for is not None else base
        for rule_id in cfg.enabled_rules:
            out.extend(RULE_FUNCTIONS[rule_id](model, cfg.rules[rule_id].severity))
    out.sort(key=Diagnostic.sort_key)
    return out


__all__ = ["RULE_FUNCTIONS", "run_rules"]
