"""Reference token ids for the tokenizer equivalence suite.

Uses the upstream tiktoken implementation over the local cl100k_base file, so
the frozen ids are independent of the Rust encoder.
"""
import json
import sys

import tiktoken
from tiktoken.load import load_tiktoken_bpe

VOCAB = sys.argv[1] if len(sys.argv) > 1 else "data/cl100k_base.tiktoken"
OUT = sys.argv[2] if len(sys.argv) > 2 else "crates/core/tests/data/tokenizer_vectors.json"

PATTERN = (
    r"""'(?i:[sdmt]|ll|ve|re)|[^\r\n\p{L}\p{N}]?+\p{L}++|\p{N}{1,3}+| ?[^\s\p{L}\p{N}]++[\r\n]*+|\s++$|\s*[\r\n]|\s+(?!\S)|\s"""
)

enc = tiktoken.Encoding(
    name="cl100k_base_local",
    pat_str=PATTERN,
    mergeable_ranks=load_tiktoken_bpe(VOCAB),
    special_tokens={
        "<|endoftext|>": 100257,
        "<|fim_prefix|>": 100258,
        "<|fim_middle|>": 100259,
        "<|fim_suffix|>": 100260,
        "<|endofprompt|>": 100276,
    },
)

STRINGS = [
    "",
    "a",
    "hello world",
    "Payment failed for order #4521: insufficient funds",
    "|E|PS|pf|o=4521|rs=insuf_funds",
    "1736949802|ERROR|payment-service|payment_failed|order_id=4521|reason=insufficient_funds",
    "2025-01-15 14:03:22 ERROR [payment-service] Payment failed for order #4521: insufficient funds",
    "    at com.shop.payment.PaymentService.charge(PaymentService.java:123)",
    "I'm sure they'll say it's fine, we've done what we'd planned",
    "DON'T SHOUT'LL 'S 'Re",
    "1234567890 12 123 1234 3.14159 -42 +7e10",
    "   leading spaces",
    "trailing spaces   ",
    "multiple   internal    spaces",
    "tabs\tand\ttabs\t\t",
    "line one\nline two\n",
    "windows\r\nline\r\nendings\r\n",
    "\n\n\n",
    "   \n   \n",
    "end with newline and spaces \n  ",
    "café naïve résumé façade",
    "日本語のテキストを分割する",
    "中文分词测试，标点符号。",
    "Здравствуйте, мир! Как дела?",
    "مرحبا بالعالم",
    "emoji 🎉🚀 test 👍🏽 family 👨‍👩‍👧",
    "def foo(bar: int) -> str:\n    return str(bar * 2)\n",
    "public Order createOrder(CreateOrderRequest request) {",
    "if (order.total > limit) {\n    throw new LimitExceededException();\n}",
    "import java.util.List;\nimport java.util.Map;",
    "func (h *Handler) Create(w http.ResponseWriter, r *http.Request) {",
    "SELECT o.id, o.total FROM orders o WHERE o.user_id = ? AND o.status = 'PAID'",
    "GET /api/v1/orders/4521?expand=items&limit=50 HTTP/1.1",
    "Mozilla/5.0 (X11; Linux x86_64) AppleWebKit/537.36 (KHTML, like Gecko)",
    "{\"key\": \"value\", \"n\": [1, 2, 3], \"nested\": {\"ok\": true}}",
    "<|endoftext|> is treated as plain text here",
    "!!!???...,,,;;;:::",
    "a-b_c.d/e\\f|g=h",
    "CamelCaseIdentifierWithManyWords snake_case_identifier_here",
    "0x7fffffff 0b1010 1_000_000",
    "trace_id=4bf92f3577b34da6a3ce929d0e0e4736 span=00f067aa0ba902b7",
    "user@example.com https://example.com/path?q=1#frag",
    "   ",
    " ",
    "\t",
    "x" * 300,
    "ab " * 40,
    "The quick brown fox jumps over the lazy dog. " * 3,
    "Ünïcödé MiXeD ÇåSé 123abc abc123",
    "# services: PS=payment-service; IS=inventory-service",
]

assert len(STRINGS) == 50, len(STRINGS)

vectors = [{"text": s, "ids": enc.encode_ordinary(s)} for s in STRINGS]
with open(OUT, "w", encoding="utf-8") as fh:
    fh.write('{"vocabulary": "cl100k_base", "vectors": [\n')
    fh.write(",\n".join(json.dumps(v, ensure_ascii=False) for v in vectors))
    fh.write("\n]}\n")
print(f"wrote {len(vectors)} vectors to {OUT}")
