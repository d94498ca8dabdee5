from .lexer import Token, tokenize
from .parser import PARSE_ERROR, ScriptAst, parse_expression_text, parse_script

__all__ = ["PARSE_ERROR", "ScriptAst", "Token", "parse_expression_text", "parse_script", "tokenize"]
