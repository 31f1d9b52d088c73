"""Regenerates lexer_sample_tokens.json with javalang 0.13.

javalang emits '>>' and '>>>' as single operators; the coedit lexer never
does (they would break nested generics), so those two are split into '>'
pieces. Shift-assignment operators are left alone.
"""
import json
import pathlib

import javalang

here = pathlib.Path(__file__).parent
source = (here / "lexer_sample.java").read_text()
tokens = []
for tok in javalang.tokenizer.tokenize(source):
    if tok.value in (">>", ">>>"):
        tokens.extend([">"] * len(tok.value))
    else:
        tokens.append(tok.value)
(here / "lexer_sample_tokens.json").write_text(json.dumps(tokens, indent=0) + "\n")
