"""Reading, validating and echoing YAML run configurations."""

from importlib import resources
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Tuple, Type, Union

import yaml
from loguru import logger
from pydantic import BaseModel, ValidationError

from ..errors import ConfigError
from ._schema import RunConfig

Lines = Dict[str, int]

DEFAULT_CONFIG_NAME = "default_config.yaml"


class _LineLoader(yaml.SafeLoader):
    """SafeLoader that keeps the node tree so keys can be traced back to lines."""


def _construct(loader: _LineLoader, node: yaml.Node, path: str, lines: Lines) -> Any:
    if isinstance(node, yaml.MappingNode):
        result: Dict[str, Any] = {}
        for key_node, value_node in node.value:
            key = str(loader.construct_object(key_node, deep=True))
            dotted = f"{path}.{key}" if path else key
            line = key_node.start_mark.line + 1
            if key in result:
                raise ConfigError(f"duplicate key (first at line {lines[dotted]})", key=dotted, line=line)
            lines[dotted] = line
            result[key] = _construct(loader, value_node, dotted, lines)
        return result
    if isinstance(node, yaml.SequenceNode):
        return [
            _construct(loader, child, f"{path}.{index}", lines)
            for index, child in enumerate(node.value)
        ]
    return loader.construct_object(node, deep=True)


def _read_document(text: str) -> Tuple[Dict[str, Any], Lines]:
    loader = _LineLoader(text)
    try:
        node = loader.get_single_node()
        lines: Lines = {}
        data = {} if node is None else _construct(loader, node, "", lines)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise ConfigError(f"invalid YAML: {exc}", line=None if mark is None else mark.line + 1) from exc
    finally:
        loader.dispose()
    if not isinstance(data, dict):
        raise ConfigError("the document must be a mapping of sections")
    return data, lines


def _line_for(key: str, lines: Lines) -> Optional[int]:
    parts = key.split(".")
    while parts:
        line = lines.get(".".join(parts))
        if line is not None:
            return line
        parts.pop()
    return None


def _describe(error: Dict[str, Any]) -> str:
    if error["type"] == "extra_forbidden":
        return "unknown key"
    if error["type"] == "missing":
        return "missing key"
    return str(error["msg"]).removeprefix("Value error, ")


def _submodel(annotation: Any) -> Optional[Type[BaseModel]]:
    if isinstance(annotation, type) and issubclass(annotation, BaseModel):
        return annotation
    return None


def _defaulted_keys(model: Type[BaseModel], raw: Any, prefix: str) -> Iterator[str]:
    """Dotted keys of ``model`` that ``raw`` leaves to their defaults."""
    present = raw if isinstance(raw, dict) else {}
    for name, info in model.model_fields.items():
        key = f"{prefix}{name}"
        sub = _submodel(info.annotation)
        if name in present:
            if sub is not None:
                yield from _defaulted_keys(sub, present[name], f"{key}.")
        elif not info.is_required():
            if sub is not None:
                yield from _defaulted_keys(sub, {}, f"{key}.")
            else:
                yield key


def validate_document(data: Dict[str, Any], lines: Optional[Lines] = None) -> RunConfig:
    """Validate an already parsed document and check the domain invariants.

    Raises:
        ConfigError: Naming the first offending key and, when known, its line.
    """
    lines = lines or {}
    try:
        config = RunConfig.model_validate(data)
    except ValidationError as exc:
        first = exc.errors()[0]
        key = ".".join(str(part) for part in first["loc"])
        raise ConfigError(_describe(first), key=key, line=_line_for(key, lines)) from exc
    try:
        config.build_model()
    except ConfigError as exc:
        raise ConfigError(exc.message, key=exc.key, line=_line_for(exc.key, lines)) from exc
    notices = [
        key
        for key in _defaulted_keys(RunConfig, data, "")
        if not key.startswith("controllers.")
    ]
    for key in notices:
        logger.warning("config key {} not set, using the built-in default", key)
    config.notices.extend(notices)
    return config


def parse_config(text: str) -> RunConfig:
    """Parse and validate a YAML run configuration.

    Unknown and duplicate keys are errors. Keys outside ``controllers`` may be omitted;
    each omission is logged and recorded in ``RunConfig.notices``.

    Raises:
        ConfigError: Naming the offending key and line.
    """
    data, lines = _read_document(text)
    return validate_document(data, lines)


def load_config(path: Union[str, Path]) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc
    config = parse_config(text)
    logger.debug("loaded configuration from {}", path)
    return config


def default_config_text() -> str:
    return resources.files("kite_ctol.config").joinpath(DEFAULT_CONFIG_NAME).read_text(encoding="utf-8")


def load_default_config() -> RunConfig:
    """The shipped configuration with the reference aircraft and controller tables."""
    return parse_config(default_config_text())


def dump_config(config: RunConfig) -> str:
    """Echo ``config`` as YAML; ``parse_config(dump_config(c)) == c``."""
    return yaml.safe_dump(
        config.model_dump(mode="json"), sort_keys=False, default_flow_style=None
    )


def _split_key(key: str) -> List[str]:
    parts = key.split(".")
    if not all(parts):
        raise ConfigError("malformed key", key=key)
    return parts


def apply_override(config: RunConfig, key: str, value: Any) -> RunConfig:
    """Return a copy of ``config`` with the numeric entry at ``key`` replaced.

    Raises:
        ConfigError: If ``key`` does not name a numeric entry or the result is invalid.
    """
    data = config.model_dump(mode="json")
    parts = _split_key(key)
    node: Any = data
    for part in parts[:-1]:
        if isinstance(node, dict) and part in node:
            node = node[part]
        elif isinstance(node, list) and part.isdigit() and int(part) < len(node):
            node = node[int(part)]
        else:
            raise ConfigError("unknown key", key=key)
    leaf = parts[-1]
    if isinstance(node, dict) and leaf in node:
        current = node[leaf]
    elif isinstance(node, list) and leaf.isdigit() and int(leaf) < len(node):
        current = node[int(leaf)]
    else:
        raise ConfigError("unknown key", key=key)
    if current is not None and (isinstance(current, bool) or not isinstance(current, (int, float))):
        raise ConfigError("only numeric entries can be overridden", key=key)
    if isinstance(node, dict):
        node[leaf] = value
    else:
        node[int(leaf)] = value
    overridden = validate_document(data)
    overridden.notices.extend(config.notices)
    return overridden
