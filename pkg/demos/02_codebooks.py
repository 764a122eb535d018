"""Codebooks: prefix-free checking, stream encoding, greedy decoding.

Run:  python demos/02_codebooks.py
"""

from wordsource import (
    DecodeError,
    IIDSource,
    MixtureSource,
    WordFunction,
    decode_prefix_free,
    encode_stream,
    expected_codeword_length,
    is_prefix_free,
    kraft_sum,
)

good = WordFunction(2, 2, ((0,), (1, 0)))
bad = WordFunction(2, 2, ((0,), (0, 1)))
dup = WordFunction(2, 2, ((0,), (0,)))

print("== prefix-free checks ==")
for name, wf in (("{0, 10}", good), ("{0, 01}", bad), ("{0, 0}", dup)):
    check = is_prefix_free(wf)
    extra = "" if check.ok else f"  witness={check.witness} ({check.reason})"
    print(f"{name:8} prefix_free={check.ok}{extra}")
print("kraft sum of {0, 10}:", kraft_sum(good))

print()
print("== encoding tracks codeword boundaries ==")
enc = encode_stream(good, [1, 0, 1, 1, 0])
print("input   : 1 0 1 1 0")
print("output  :", "".join(map(str, enc.output)))
print("zeta    :", [int(v) for v in enc.boundaries])
print("(zeta_k - zeta_{k-1} recovers each codeword length)")

print()
print("== greedy decoding inverts encoding ==")
decoded, consumed = decode_prefix_free(good, enc.output)
print("decoded :", "".join(map(str, decoded)), f" consumed={consumed}")
partial, consumed = decode_prefix_free(good, [1])
print("decoding a bare '1' consumes nothing:", list(partial), consumed)
try:
    decode_prefix_free(good, [1, 1])
except DecodeError as err:
    print("decoding '11' fails:", err)

print()
print("== expected codeword lengths per ergodic component ==")
coin = IIDSource([0.5, 0.5])
print("fair coin with {0, 10}:", expected_codeword_length(coin, good))
mix = MixtureSource([0.5, 0.5], [coin, IIDSource([0.9, 0.1])])
print("mixture with {0, 10}  :", expected_codeword_length(mix, good))
