import argparse
from dataclasses import MISSING, fields


def parse_into(config_cls, description):
    """Build an argparse parser from a dataclass and return a populated instance."""
    parser = argparse.ArgumentParser(description=description)
    for f in fields(config_cls):
        flag = "--" + f.name.replace("_", "-")
        default = f.default if f.default_factory is MISSING else f.default_factory()
        if isinstance(default, bool):
            parser.add_argument(flag, action="store_true", default=default)
        elif isinstance(default, (list, tuple)):
            kind = type(default[0])
            parser.add_argument(flag, type=lambda s, k=kind: [k(v) for v in s.split(",")],
                                default=list(default), help="comma separated")
        else:
            parser.add_argument(flag, type=type(default), default=default)
    return config_cls(**vars(parser.parse_args()))
