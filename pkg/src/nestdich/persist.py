"""JSON model files.

Layout::

    {"format_version": 1,
     "schema": {"attributes": [...], "class_attribute": ..., "classes": [...], "encoding": {...}},
     "model": {"kind": "nd", "tree": {...}}
            | {"kind": "bagging" | "adaboost", "members": [tree, ...], "weights": [...]},
     "provenance": {"spec": {...}, "seed": ..., "version": ...}}

Floats are written with Python's shortest round-trip representation, so a
loaded model predicts bit-for-bit like the saved one.
"""

import json
from dataclasses import dataclass

from . import __version__
from .data import Attribute, Encoder
from .dichotomy import NestedDichotomy
from .ensemble import ADABOOST, BAGGING, EnsembleModel
from .errors import DataError, UsageError

FORMAT_VERSION = 1


@dataclass
class ModelFile:
    model: object
    class_attribute: str = "class"
    provenance: dict = None


def model_to_dict(model, class_attribute="class", provenance=None):
    encoder = model.encoder
    schema = {
        "attributes": [a.to_dict() for a in encoder.attributes],
        "class_attribute": class_attribute,
        "classes": list(model.classes),
        "encoding": encoder.to_dict(),
    }
    if isinstance(model, NestedDichotomy):
        payload = {"kind": "nd", "tree": model.tree_to_dict()}
    elif isinstance(model, EnsembleModel):
        payload = {
            "kind": model.method,
            "members": [m.tree_to_dict() for m in model.members],
            "weights": [float(w) for w in model.weights],
        }
    else:
        raise UsageError(f"cannot serialize {type(model).__name__}")
    return {
        "format_version": FORMAT_VERSION,
        "schema": schema,
        "model": payload,
        "provenance": dict(provenance or {}, version=__version__),
    }


def model_from_dict(doc):
    if not isinstance(doc, dict) or "format_version" not in doc:
        raise DataError("not a model file: missing format_version")
    version = doc["format_version"]
    if version != FORMAT_VERSION:
        raise DataError(f"unsupported model format_version {version!r} (expected {FORMAT_VERSION})")
    try:
        schema = doc["schema"]
        attributes = tuple(Attribute.from_dict(a) for a in schema["attributes"])
        encoder = Encoder.from_dict(attributes, schema["encoding"])
        classes = tuple(schema["classes"])
        payload = doc["model"]
        kind = payload["kind"]
        if kind == "nd":
            model = NestedDichotomy.from_tree_dict(payload["tree"], encoder, classes)
        elif kind in (BAGGING, ADABOOST):
            members = tuple(
                NestedDichotomy.from_tree_dict(t, encoder, classes) for t in payload["members"]
            )
            model = EnsembleModel(members, tuple(float(w) for w in payload["weights"]), kind,
                                  encoder, classes)
        else:
            raise DataError(f"unknown model kind {kind!r}")
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, DataError):
            raise
        raise DataError(f"invalid model file: {exc!r}") from None
    return ModelFile(model, schema.get("class_attribute", "class"), doc.get("provenance"))


def dumps(model, class_attribute="class", provenance=None):
    return json.dumps(model_to_dict(model, class_attribute, provenance), indent=1) + "\n"


def save_model(model, path, class_attribute="class", provenance=None):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(model, class_attribute, provenance))


def load_model(path):
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: invalid model document ({exc})") from None
    return model_from_dict(doc)
