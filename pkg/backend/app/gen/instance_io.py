"""Instance files: {"jobs": [{"id": 0, "r": 0, "d": 10, "p": 4}, ...]}."""

import json
from pathlib import Path

from pydantic import ValidationError

from ..core.models import Instance
from ..errors import InvalidJobError


def parse_instance(text: str, source: str = "<string>") -> Instance:
    try:
        return Instance.model_validate_json(text)
    except ValidationError as e:
        raise InvalidJobError(f"{source}: {e}") from e


def load_instance(path) -> Instance:
    path = Path(path)
    return parse_instance(path.read_text(), source=str(path))


def dump_instance(inst: Instance) -> str:
    return json.dumps(inst.model_dump(mode="json"), indent=2) + "\n"


def write_instance(inst: Instance, path) -> None:
    Path(path).write_text(dump_instance(inst))
