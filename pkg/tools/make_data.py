"""Regenerate the scenario files in src/forcing_lab/data."""

from pathlib import Path

from forcing_lab import io
from forcing_lab.plane.scenario import BUNDLED

DATA = Path(__file__).resolve().parents[1] / "src" / "forcing_lab" / "data"

STATIC = {
    "fib": {"kind": "sft", "name": "golden mean shift", "transition_matrix": [[1, 1], [1, 0]], "labels": [1, 0]},
    "full2": {"kind": "sft", "name": "full 2-shift", "transition_matrix": [[1, 1], [1, 1]]},
    "sharko": {"kind": "interval", "name": "3-cycle 0 -> 1 -> 2 -> 0",
               "breakpoints": [["0", "1"], ["1", "2"], ["2", "0"]]},
    "translation": {"kind": "rotation", "name": "translation by (1/2, 1/3)",
                    "composition": [{"type": "translation", "vector": [0.5, 1 / 3]}]},
    "raised_cosine": {"kind": "rotation", "name": "horizontal raised-cosine shear",
                      "composition": [{"type": "hshear", "profile": "raised-cosine", "amplitude": 1.0}],
                      "measure": {"grid": 32}},
    "coupled_shear": {"kind": "rotation", "name": "vertical after horizontal sine shear",
                      "composition": [{"type": "hshear", "profile": "sine", "amplitude": 0.4},
                                      {"type": "vshear", "profile": "sine", "amplitude": 0.4}]},
}


def documents() -> dict:
    docs = dict(STATIC)
    for name, build in BUNDLED.items():
        docs[name.replace("-", "_")] = build().to_dict()
    return docs


if __name__ == "__main__":
    for name, doc in documents().items():
        io.validate_document(doc, name)
        io.atomic_write(DATA / f"{name}.json", io.dumps(doc))
        print(DATA / f"{name}.json")
