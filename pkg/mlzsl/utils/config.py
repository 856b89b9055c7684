import copy
import hashlib
import inspect
import json
from dataclasses import fields, is_dataclass

from mmcv import Config, ConfigDict

from .exceptions import ValidationError


def config_to_dict(cfg):
    """Plain nested ``dict`` copy of a :obj:`mmcv.Config` or mapping."""
    if isinstance(cfg, Config):
        cfg = cfg._cfg_dict
    if isinstance(cfg, ConfigDict):
        return cfg.to_dict()
    return copy.deepcopy(dict(cfg))


def config_hash(cfg):
    """sha256 hex digest of the canonical JSON dump of a resolved config."""
    text = json.dumps(
        config_to_dict(cfg),
        sort_keys=True,
        separators=(',', ':'),
        ensure_ascii=True)
    return hashlib.sha256(text.encode('utf-8')).hexdigest()


def merge_defaults(cfg, defaults):
    """Fill keys missing from ``cfg`` with ``defaults``, recursively.

    Component dicts (those carrying a ``type``) are replaced as a whole when
    present in ``cfg``.
    """
    merged = copy.deepcopy(defaults)
    for key, value in cfg.items():
        default = merged.get(key)
        if (isinstance(default, dict) and isinstance(value, dict)
                and 'type' not in default):
            merged[key] = merge_defaults(value, default)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def check_keys(cfg, schema, prefix=''):
    """Reject keys of ``cfg`` that ``schema`` does not name."""
    for key, value in cfg.items():
        name = f'{prefix}{key}'
        if key not in schema:
            raise ValidationError(f'unknown config key: {name}')
        default = schema[key]
        if (isinstance(default, dict) and 'type' not in default
                and isinstance(value, dict)):
            check_keys(value, default, name + '.')


def component_arguments(obj_cls):
    """Keyword arguments accepted by a registered class.

    A class taking ``**kwargs`` lists its accepted keys in an ``arguments``
    attribute, either a tuple of names or a dataclass.
    """
    arguments = getattr(obj_cls, 'arguments', None)
    if arguments is not None:
        if is_dataclass(arguments):
            return tuple(f.name for f in fields(arguments))
        return tuple(arguments)
    params = inspect.signature(obj_cls.__init__).parameters
    return tuple(
        name for name, p in params.items()
        if name != 'self' and p.kind in (p.POSITIONAL_OR_KEYWORD,
                                         p.KEYWORD_ONLY))


def check_component(cfg, registry, name):
    """Validate a ``dict(type=...)`` component config against ``registry``.

    Returns:
        type: The registered class.
    """
    if not isinstance(cfg, dict) or 'type' not in cfg:
        raise ValidationError(f'{name} must be a dict with a "type" key')
    obj_cls = registry.get(cfg['type'])
    if obj_cls is None:
        raise ValidationError(
            f'{name}.type: {cfg["type"]!r} is not in the {registry.name} '
            f'registry (known: {sorted(registry.module_dict)})')
    allowed = component_arguments(obj_cls)
    for key in cfg:
        if key != 'type' and key not in allowed:
            raise ValidationError(f'unknown config key: {name}.{key}')
    return obj_cls


def load_config(filename, defaults, cfg_options=None):
    """Read a ``.py``/``.json`` config, apply overrides and fill defaults.

    Args:
        filename (str): Config file; ``_base_`` inheritance is supported.
        defaults (dict): Schema with default values; unknown keys in the
            file or in ``cfg_options`` are rejected.
        cfg_options (dict, optional): Dotted-key overrides, as produced by
            :class:`mmcv.DictAction`.

    Returns:
        :obj:`mmcv.Config`
    """
    cfg = Config.fromfile(filename)
    if cfg_options:
        cfg.merge_from_dict(cfg_options)
    raw = config_to_dict(cfg)
    check_keys(raw, defaults)
    return Config(merge_defaults(raw, defaults), filename=filename)
