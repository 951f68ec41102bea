from .encoding import (
    SCHEMES,
    count_tokens,
    decode_grid,
    encode_grid,
    estimate_grid_tokens,
    parse_completion,
)
from .prompts import (
    CHAT_SYSTEM,
    COMPLETION_PREAMBLE,
    PromptBundle,
    build_chat_prompt,
    build_completion_prompt,
    estimate_text_tokens,
)
from .client import (
    CompletionClient,
    HTTPClient,
    LLMClientError,
    MockClient,
    build_fixtures,
    prompt_key,
)
from .solve import AUGMENTATIONS, LLMSolveResult, size_accuracy, solve_with_llm

__all__ = [
    "SCHEMES", "count_tokens", "decode_grid", "encode_grid",
    "estimate_grid_tokens", "parse_completion",
    "CHAT_SYSTEM", "COMPLETION_PREAMBLE", "PromptBundle",
    "build_chat_prompt", "build_completion_prompt", "estimate_text_tokens",
    "CompletionClient", "HTTPClient", "LLMClientError", "MockClient",
    "build_fixtures", "prompt_key",
    "AUGMENTATIONS", "LLMSolveResult", "size_accuracy", "solve_with_llm",
]
