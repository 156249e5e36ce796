from padic_k1.cli.expression import parse_unit, tokenize
from padic_k1.cli.main import build_parser, main, start

__all__ = ["build_parser", "main", "parse_unit", "start", "tokenize"]
