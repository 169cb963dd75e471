from .words import Presentation, Word, parse_presentation


def create_cli():
    from .cli import cli
    return cli
