import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dnascan import (
    DuplicatePattern,
    EmptyPatternSet,
    IllegalByte,
    PatternSet,
    UnequalLength,
    build_trie,
    compile_patterns,
    compute_failures,
    delta,
    eliminate_failures,
    is_final,
    load_table1,
    renumber_finals,
)
from dnascan.automaton import dump, load
from dnascan.oracle import naive_scan
from dnascan.scanner import scan_sequential

from conftest import FIG3, all_strings

NON_ALPHABET = [c for c in range(256) if c not in b"acgt"]


def prefix_of(trie, node):
    """Spell a trie node by walking down from the root."""
    parents = {child: (par, byte) for par, nd in enumerate(trie) for byte, child in nd.children.items()}
    out = []
    while node:
        node, byte = parents[node]
        out.append(byte)
    return bytes(reversed(out))


def node_for(trie, word):
    cur = 0
    for byte in word:
        cur = trie[cur].children[byte]
    return cur


class TestPatternSet:
    def test_normalizes_case(self):
        assert PatternSet.from_iterable(["ACG", b"tTa"]).patterns == (b"acg", b"tta")

    def test_empty(self):
        with pytest.raises(EmptyPatternSet):
            compile_patterns([])

    def test_unequal(self):
        with pytest.raises(UnequalLength):
            compile_patterns(["acg", "ac"])

    def test_zero_length(self):
        with pytest.raises(UnequalLength):
            compile_patterns([""])

    def test_illegal_byte(self):
        with pytest.raises(IllegalByte):
            compile_patterns(["acn"])

    def test_duplicate(self):
        with pytest.raises(DuplicatePattern):
            compile_patterns(["acg", "ACG"])


class TestTrie:
    @pytest.mark.parametrize(
        "patterns, nodes",
        [(FIG3, 11), (["a"], 2), (["acgt", "acga"], 6)],
    )
    def test_node_count(self, patterns, nodes):
        assert len(build_trie(PatternSet.from_iterable(patterns))) == nodes

    def test_terminals_on_pattern_nodes(self):
        pset = PatternSet.from_iterable(FIG3)
        trie = build_trie(pset)
        for pid, pat in enumerate(pset):
            node = node_for(trie, pat)
            assert trie[node].terminal == pid and trie[node].depth == 3
        assert sum(n.terminal is not None for n in trie) == 4

    def test_failure_examples(self):
        trie = compute_failures(build_trie(PatternSet.from_iterable(FIG3)))
        assert trie[0].failure == 0
        for word in (b"a", b"c", b"t"):
            assert trie[node_for(trie, word)].failure == 0
        assert trie[node_for(trie, b"act")].failure == node_for(trie, b"ct")
        assert trie[node_for(trie, b"tg")].failure == 0

    @given(st.lists(st.text("acgt", min_size=3, max_size=3), min_size=1, max_size=8, unique=True))
    def test_failure_is_longest_suffix_prefix(self, patterns):
        trie = compute_failures(build_trie(PatternSet.from_iterable(patterns)))
        prefixes = {prefix_of(trie, i): i for i in range(len(trie))}
        for i, node in enumerate(trie):
            word = prefix_of(trie, i)
            expected = 0
            for cut in range(1, len(word)):
                if word[cut:] in prefixes:
                    expected = prefixes[word[cut:]]
                    break
            assert node.failure == expected
            assert i == 0 or trie[node.failure].depth < node.depth


class TestEliminateAndRenumber:
    def test_goto_and_failure_transitions(self):
        pset = PatternSet.from_iterable(FIG3)
        trie = compute_failures(build_trie(pset))
        table = eliminate_failures(trie)
        at = lambda w: node_for(trie, w)  # noqa: E731
        assert table[at(b"ac"), ord("g")] == at(b"acg")
        assert table[at(b"ct"), ord("a")] == at(b"cta")
        assert table[at(b"act"), ord("a")] == at(b"cta")
        assert table[at(b"act"), ord("g")] == at(b"tg")
        assert (table[:, NON_ALPHABET] == 0).all()

    def test_aaaa(self):
        aut = compile_patterns(["aaaa"])
        assert (aut.a, aut.b, aut.f) == (5, 1, 4)
        assert aut.depths.tolist() == [0, 1, 2, 3, 4]
        assert aut.delta(4, ord("a")) == 4

    def test_fig3_compiled_layout(self, fig3):
        # No merging is performed: 11 trie states, one final per pattern.
        assert (fig3.a, fig3.b, fig3.f, fig3.m, fig3.start) == (11, 4, 7, 3, 0)
        assert fig3.outputs == {7: 0, 8: 1, 9: 2, 10: 3}

    def test_renumber_is_bijection(self):
        pset = PatternSet.from_iterable(["acgt", "acga", "ttga", "gacg"])
        trie = compute_failures(build_trie(pset))
        table = eliminate_failures(trie)
        aut = renumber_finals(trie, table, pset)
        assert sorted(np.unique(aut.stt).tolist()) == list(range(aut.a))
        # Same language before and after renumbering.
        terminal = [n.terminal for n in trie]
        for text in all_strings(6):
            q, old = 0, set()
            for i, c in enumerate(text):
                q = int(table[q, c])
                if terminal[q] is not None:
                    old.add((terminal[q], i - 3))
            assert old == set(scan_sequential(aut, text).to_set())


class TestDeltaFinality:
    def test_table1_examples(self):
        t1 = load_table1()
        assert (t1.a, t1.b, t1.f) == (9, 3, 6)
        assert delta(t1, 2, ord("g")) == 6
        assert delta(t1, 5, ord("a")) == 8
        assert delta(t1, 3, ord("\n")) == 0
        assert is_final(t1, 6)
        assert not is_final(t1, 0)
        assert not is_final(t1, 5)

    @pytest.mark.parametrize("patterns", [FIG3, ["aaaa"], ["acgtacgt", "ttttaaaa", "gggggggg"]])
    def test_totality_threshold_and_reset(self, patterns):
        aut = compile_patterns(patterns)
        assert aut.stt.shape == (aut.a, 256)
        for s in range(aut.a):
            for c in range(256):
                assert 0 <= delta(aut, s, c) < aut.a
            assert is_final(aut, s) == (s >= aut.f)
            assert all(delta(aut, s, c) == 0 for c in NON_ALPHABET)
        assert aut.f >= 1 and not is_final(aut, 0)
        assert sorted(aut.outputs.values()) == list(range(len(patterns)))

    def test_table_is_read_only(self, fig3):
        with pytest.raises(ValueError):
            fig3.stt[0, 0] = 1


@st.composite
def small_pattern_sets(draw):
    m = draw(st.integers(1, 4))
    return draw(st.lists(st.text("acgt", min_size=m, max_size=m), min_size=1, max_size=8, unique=True))


@settings(max_examples=25, deadline=None)
@given(small_pattern_sets())
def test_language_equals_oracle_on_all_short_strings(patterns):
    aut = compile_patterns(patterns)
    for text in all_strings(6):
        assert scan_sequential(aut, text).to_set() == naive_scan(patterns, text)


@settings(max_examples=50, deadline=None)
@given(small_pattern_sets(), st.binary(max_size=40).map(lambda b: bytes(b"acgt"[x % 4] for x in b)))
def test_state_depth_is_longest_suffix_prefix(patterns, text):
    aut = compile_patterns(patterns)
    prefixes = {p.encode()[:i] for p in patterns for i in range(len(p) + 1)}
    q = 0
    for i, c in enumerate(text):
        q = delta(aut, q, c)
        consumed = text[: i + 1]
        longest = max(j for j in range(len(consumed) + 1) if consumed[len(consumed) - j:] in prefixes)
        assert aut.depths[q] == longest


def test_dump_round_trip(fig3):
    again = load(dump(fig3))
    assert np.array_equal(again.stt, fig3.stt)
    assert (again.a, again.b, again.f, again.m) == (fig3.a, fig3.b, fig3.f, fig3.m)
    assert again.outputs == fig3.outputs


def test_dump_header_and_widths(fig3):
    lines = dump(fig3).splitlines()
    assert lines[0] == "11 4 7 3"
    assert len(lines) == 1 + 11 + 4
    assert all(len(line.split()) == 256 for line in lines[1:12])
    assert lines[12:] == ["7 0", "8 1", "9 2", "10 3"]


@pytest.mark.parametrize(
    "text",
    [
        "2 1 0 1\n" + "0 " * 256 + "\n1\n3 0\n",  # f inconsistent
        "2 1 1 1\n" + " ".join(["5"] * 256) + "\n" + " ".join(["0"] * 256) + "\n1 0\n",
    ],
)
def test_load_rejects_malformed(text):
    with pytest.raises(ValueError):
        load(text)


def test_table1_with_merged_row_split_equals_compiled(fig3):
    """Table I's row 5 stands for both "ct" and "tg", which disagree only
    on 'g' ("ctg" continues as "tg"). Splitting that row recovers the
    compiled language exactly."""
    t1 = load_table1()
    stt = np.zeros((10, 256), dtype=np.uint32)
    stt[:9] = t1.stt
    # Renumber finals 6,7,8 -> 7,8,9 and add "ct" as state 6.
    remap = np.array([0, 1, 2, 3, 4, 5, 7, 8, 9], dtype=np.uint32)
    stt[:9] = remap[t1.stt]
    stt[[6, 7, 8, 9]] = stt[[5, 6, 7, 8]]
    stt[5] = remap[t1.stt[5]]  # "tg"
    stt[6] = stt[5]  # "ct"
    stt[6, ord("g")] = 5
    stt[3, ord("t")] = 6
    starts = lambda aut, text: {s for s in scan_sequential(aut, text).starts.tolist()}  # noqa: E731
    from dnascan.automaton import Automaton

    split = Automaton(stt=stt, f=7, m=3, final_pattern=np.array([0, 1, 2]))
    for text in all_strings(6):
        assert starts(split, text) == starts(fig3, text)
