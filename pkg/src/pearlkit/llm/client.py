"""Completion backends: a deterministic mock for tests and offline replay,
and a minimal HTTP client for real endpoints."""

from __future__ import annotations

import hashlib
import json
import os
import time
import urllib.error
import urllib.request
from abc import ABC, abstractmethod
from pathlib import Path

from .prompts import PromptBundle


class LLMClientError(RuntimeError):
    pass


def prompt_key(bundle: PromptBundle) -> str:
    """Stable content hash of a prompt; fixtures are keyed by it."""
    if bundle.mode == "completion":
        payload = bundle.text or ""
    else:
        payload = json.dumps(bundle.messages, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


class CompletionClient(ABC):
    """A thing that turns prompts into raw completion text."""

    max_retries = 3

    @abstractmethod
    def complete(self, bundle: PromptBundle) -> str: ...

    def send(self, bundle: PromptBundle) -> str:
        """complete() with retries on transient failures."""
        delay = 1.0
        for attempt in range(self.max_retries):
            try:
                return self.complete(bundle)
            except LLMClientError:
                if attempt == self.max_retries - 1:
                    raise
                time.sleep(delay)
                delay *= 2
        raise AssertionError("unreachable")


class MockClient(CompletionClient):
    """Replays canned responses keyed by prompt hash.

    on_missing: "error" raises KeyError naming the hash (catching fixture
    drift loudly); "empty" returns an unparseable empty string instead.
    """

    def __init__(self, fixtures: dict[str, str] | str | Path,
                 on_missing: str = "error"):
        if isinstance(fixtures, (str, Path)):
            fixtures = json.loads(Path(fixtures).read_text(encoding="utf-8"))
        self.fixtures = dict(fixtures)
        if on_missing not in ("error", "empty"):
            raise ValueError("on_missing must be 'error' or 'empty'")
        self.on_missing = on_missing
        self.calls = 0

    def complete(self, bundle: PromptBundle) -> str:
        self.calls += 1
        key = prompt_key(bundle)
        if key in self.fixtures:
            return self.fixtures[key]
        if self.on_missing == "empty":
            return ""
        raise KeyError(
            f"no fixture for prompt {key} (task {bundle.task_id} "
            f"test {bundle.test_index} aug {bundle.augmentation})"
        )


def build_fixtures(pairs: list[tuple[PromptBundle, str]]) -> dict[str, str]:
    """Fixture dict from (prompt, response) pairs, e.g. recorded live runs."""
    return {prompt_key(b): response for b, response in pairs}


class HTTPClient(CompletionClient):
    """Minimal JSON-over-HTTP backend (OpenAI-compatible shapes).

    The API key is read from the environment (default LLM_API_KEY) so that
    profiles checked into experiment configs never hold secrets.
    """

    def __init__(self, endpoint: str, model: str, auth_env: str = "LLM_API_KEY",
                 temperature: float = 0.0, max_tokens: int = 2048,
                 timeout: float = 120.0):
        self.endpoint = endpoint
        self.model = model
        self.auth_env = auth_env
        self.temperature = temperature
        self.max_tokens = max_tokens
        self.timeout = timeout

    def _headers(self) -> dict:
        headers = {"Content-Type": "application/json"}
        key = os.environ.get(self.auth_env)
        if key:
            headers["Authorization"] = f"Bearer {key}"
        return headers

    def complete(self, bundle: PromptBundle) -> str:
        if bundle.mode == "chat":
            payload = {
                "model": self.model,
                "messages": bundle.messages,
                "temperature": self.temperature,
                "max_tokens": self.max_tokens,
            }
        else:
            payload = {
                "model": self.model,
                "prompt": bundle.text,
                "temperature": self.temperature,
                "max_tokens": self.max_tokens,
            }
        req = urllib.request.Request(
            self.endpoint,
            data=json.dumps(payload).encode("utf-8"),
            headers=self._headers(),
            method="POST",
        )
        try:
            with urllib.request.urlopen(req, timeout=self.timeout) as resp:
                body = json.loads(resp.read().decode("utf-8"))
        except urllib.error.HTTPError as e:
            raise LLMClientError(f"endpoint returned {e.code}: {e.reason}") from e
        except (urllib.error.URLError, TimeoutError) as e:
            raise LLMClientError(f"request failed: {e}") from e
        try:
            choice = body["choices"][0]
            if bundle.mode == "chat":
                return choice["message"]["content"]
            return choice["text"]
        except (KeyError, IndexError, TypeError) as e:
            raise LLMClientError(f"malformed response body: {body!r}") from e
