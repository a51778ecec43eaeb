"""Drive the HTTP connector against a canned transport.

No network is involved: httpx.MockTransport plays the server, which
shows exactly what a real JSON hits API needs to return and how
failures surface as SourceError tagged with the engine id.
"""

import httpx

from innometer import RemoteEngine, SearchPattern, SourceError, observe_series

pattern = SearchPattern(marker="laser", terms=("fiber", "pulse"))


def fake_api(request: httpx.Request) -> httpx.Response:
    query = request.url.params["q"]
    # Halve the count for every extra term, like a real index would shrink.
    depth = len(query.split()) - 1
    return httpx.Response(200, json={"result": {"total": 160 >> depth}})


engine = RemoteEngine(
    engine_id="mock-api",
    url_template="https://search.invalid/v1?q={query}",
    count_path="result.total",
    transport=httpx.MockTransport(fake_api),
)

series = observe_series(engine, pattern, kind="hits")
print(f"baseline {series.baseline}, per-query counts {series.values}")

flaky = RemoteEngine(
    engine_id="flaky-api",
    url_template="https://search.invalid/v1?q={query}",
    count_path="result.total",
    transport=httpx.MockTransport(lambda request: httpx.Response(500)),
)

try:
    observe_series(flaky, pattern, kind="hits")
except SourceError as exc:
    print(f"\nas expected, the flaky engine failed: [{exc.engine_id}] {exc}")
