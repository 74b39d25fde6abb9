"""Word-level text utilities."""

import re

WORD_RE = re.compile(r"[A-Za-z0-9]+")


def normalize(text):
    """Lowercase text and collapse surrounding whitespace."""
    return text.strip().lower()


def slugify(text, sep="-"):
    """Turn free text into a URL slug."""
    words = WORD_RE.findall(normalize(text))
    return sep.join(words)


def count_words(text):
    """Count how many times each word occurs."""
    counts = {}
    for word in WORD_RE.findall(normalize(text)):
        if word in counts:
            counts[word] += 1
        else:
            counts[word] = 1
    return counts


class Tokenizer:
    """Splits text on a configurable delimiter."""

    def __init__(self, delimiter=" "):
        self.delimiter = delimiter

    def split(self, text):
        parts = []
        for piece in text.split(self.delimiter):
            piece = piece.strip()
            if piece:
                parts.append(piece)
        return parts
