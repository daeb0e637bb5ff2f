"""Unit tests for src/summation/sequences.py module."""

import numpy as np
import pytest

from src.errors import SequenceSyntaxError
from src.summation.sequences import BinarySeq, Periodic, dump_corpus, load_corpus, random_pair


class TestParse:
    """Tests for the prefix[pattern]* syntax."""

    def test_prefix_and_periodic_tail(self):
        """0110[01]* should continue 0, 1, 0, 1 after the prefix."""
        a = BinarySeq.parse("0110[01]*")

        assert a.prefix == (0, 1, 1, 0)
        assert a.tail == Periodic((0, 1))
        assert a.bits(9) == (0, 1, 1, 0, 0, 1, 0, 1, 0)

    def test_bare_prefix_has_zero_tail(self):
        """A bare prefix should be followed by zeros."""
        a = BinarySeq.parse("101")

        assert a[3] == 0
        assert a[1000] == 0

    def test_zero_pattern_collapses(self):
        """[00]* is the zero tail and prints as nothing."""
        assert str(BinarySeq.parse("01[00]*")) == "01"

    def test_whitespace_ignored(self):
        """Surrounding whitespace should be stripped."""
        assert BinarySeq.parse("  11[1]*\n") == BinarySeq.parse("11[1]*")

    def test_string_form(self):
        """str should give back the canonical text."""
        assert str(BinarySeq.parse("0110[01]*")) == "0110[01]*"

    @pytest.mark.parametrize("text", ["012", "01[1]", "ab", "[01]*1"])
    def test_bad_syntax(self, text):
        """Anything outside bits[pattern]* should raise SequenceSyntaxError."""
        with pytest.raises(SequenceSyntaxError) as exc_info:
            BinarySeq.parse(text)

        assert exc_info.value.category == "parse"

    def test_empty_pattern(self):
        """[]* should be rejected."""
        with pytest.raises(SequenceSyntaxError, match="empty periodic pattern"):
            BinarySeq.parse("01[]*")


class TestBinarySeq:
    """Tests for sequence access and editing."""

    def test_constant_sequences(self):
        """constant(1) is all ones; constant(0) is all zeros."""
        assert BinarySeq.constant(1).bits(5) == (1, 1, 1, 1, 1)
        assert BinarySeq.constant(0).bits(5) == (0, 0, 0, 0, 0)
        assert str(BinarySeq.constant(1)) == "[1]*"

    def test_negative_index(self):
        """Negative indices should raise IndexError."""
        with pytest.raises(IndexError):
            BinarySeq.parse("1")[-1]

    def test_non_bit_prefix(self):
        """Prefix entries other than 0 and 1 should raise ValueError."""
        with pytest.raises(ValueError):
            BinarySeq((0, 2))

    def test_with_bit_extends_prefix(self):
        """Setting a bit past the prefix should grow the prefix."""
        a = BinarySeq.parse("01").with_bit(5, 1)

        assert a.prefix == (0, 1, 0, 0, 0, 1)
        assert a[6] == 0

    def test_with_bit_keeps_tail(self):
        """The periodic tail should follow the new prefix."""
        a = BinarySeq.parse("[10]*").with_bit(0, 0)

        assert a.bits(4) == (0, 0, 1, 0)

    def test_first_agreement(self):
        """Sequences differing last at index 2 agree from 3 on."""
        a = BinarySeq.parse("1101")
        b = BinarySeq.parse("0011")

        assert a.first_agreement(b, 8) == 3
        assert a.first_agreement(a, 8) == 0

    def test_random_is_seeded(self):
        """The same generator seed should give the same sequence."""
        first = BinarySeq.random(np.random.default_rng(3), 12)
        second = BinarySeq.random(np.random.default_rng(3), 12)

        assert first == second
        assert len(first.prefix) == 12

    def test_random_pair_agrees_late(self):
        """random_pair should give sequences agreeing from agree_from on."""
        a, b = random_pair(np.random.default_rng(5), 16, 6)

        assert a.bits(40)[6:] == b.bits(40)[6:]
        assert a.first_agreement(b, 16) <= 6


class TestCorpus:
    """Tests for reading and writing sequence files."""

    def test_load_skips_comments_and_blanks(self, corpus_file):
        """The corpus fixture holds two sequences among a comment and a blank line."""
        sequences = load_corpus(corpus_file)

        assert [str(s) for s in sequences] == ["0110[01]*", "1010"]

    def test_error_names_line(self, temp_dir):
        """A bad line should be reported with its line number."""
        path = temp_dir / "bad.txt"
        path.write_text("01\n# comment\n0x1\n", encoding="utf-8")

        with pytest.raises(SequenceSyntaxError, match="line 3"):
            load_corpus(path)

    def test_dump_then_load(self, temp_dir):
        """Dumped sequences should load back unchanged."""
        sequences = [BinarySeq.parse("1[01]*"), BinarySeq.parse("0001")]

        path = dump_corpus(sequences, temp_dir / "nested" / "corpus.txt")

        assert load_corpus(path) == sequences
