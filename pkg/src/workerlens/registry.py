"""Persistent model registry stored beside the event logs.

Entries are appended to ``<root>/models/registry.ndjson`` as versioned
documents (spec + selection report + evaluation report + training stats
+ learned model state), so a restarted service sees every trained model.
"""

from __future__ import annotations

import datetime as dt
import json
import os
from dataclasses import dataclass

from .explain import TrainStats
from .learn import ModelSpec, model_from_doc

FORMAT_VERSION = 1


@dataclass
class ModelRegistryEntry:
    model_id: str
    scenario: int
    spec: ModelSpec
    selection: dict
    eval_report: dict
    feature_names: list
    train_stats: TrainStats
    model_doc: dict
    created_at: str

    def to_doc(self):
        return {
            "version": FORMAT_VERSION,
            "model_id": self.model_id,
            "scenario": self.scenario,
            "spec": self.spec.to_doc(),
            "selection": self.selection,
            "eval": self.eval_report,
            "feature_names": list(self.feature_names),
            "train_stats": self.train_stats.to_doc(),
            "model": self.model_doc,
            "created_at": self.created_at,
        }

    @classmethod
    def from_doc(cls, doc):
        return cls(
            model_id=doc["model_id"],
            scenario=int(doc["scenario"]),
            spec=ModelSpec.from_doc(doc["spec"]),
            selection=doc["selection"],
            eval_report=doc["eval"],
            feature_names=list(doc["feature_names"]),
            train_stats=TrainStats.from_doc(doc["train_stats"]),
            model_doc=doc["model"],
            created_at=doc["created_at"],
        )

    def load_model(self):
        return model_from_doc(self.model_doc)

    def summary(self):
        return {
            "model_id": self.model_id,
            "scenario": self.scenario,
            "spec": self.spec.to_doc(),
            "accuracy": self.eval_report.get("accuracy"),
            "features": list(self.feature_names),
            "created_at": self.created_at,
        }


class NoSuchModel(KeyError):
    """The requested model id is not registered."""

    code = "no_such_model"


class ModelRegistry:
    def __init__(self, root: str):
        self.dir = os.path.join(str(root), "models")
        os.makedirs(self.dir, exist_ok=True)
        self.path = os.path.join(self.dir, "registry.ndjson")
        self._entries: dict[str, ModelRegistryEntry] = {}
        self._order: list[str] = []
        if os.path.exists(self.path):
            with open(self.path, "r", encoding="utf-8") as fh:
                for line in fh:
                    if line.strip():
                        entry = ModelRegistryEntry.from_doc(json.loads(line))
                        self._entries[entry.model_id] = entry
                        self._order.append(entry.model_id)

    def add(self, scenario, spec, selection, eval_report, feature_names,
            train_stats, model_doc) -> ModelRegistryEntry:
        model_id = f"m{len(self._order) + 1:04d}"
        entry = ModelRegistryEntry(
            model_id=model_id,
            scenario=scenario,
            spec=spec,
            selection=selection,
            eval_report=eval_report,
            feature_names=list(feature_names),
            train_stats=train_stats,
            model_doc=model_doc,
            created_at=dt.datetime.now(dt.timezone.utc).isoformat(timespec="seconds"),
        )
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(entry.to_doc(), separators=(",", ":")) + "\n")
        self._entries[model_id] = entry
        self._order.append(model_id)
        return entry

    def get(self, model_id: str) -> ModelRegistryEntry:
        try:
            return self._entries[model_id]
        except KeyError:
            raise NoSuchModel(model_id) from None

    def latest(self, scenario: int | None = None) -> ModelRegistryEntry | None:
        for model_id in reversed(self._order):
            entry = self._entries[model_id]
            if scenario is None or entry.scenario == scenario:
                return entry
        return None

    def list(self) -> list[ModelRegistryEntry]:
        return [self._entries[m] for m in self._order]
