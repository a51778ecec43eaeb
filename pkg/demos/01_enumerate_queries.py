"""Every search pattern expands into 2^N - 1 conjunctive queries.

A pattern is a marker plus N key terms.  The queries are all nonempty
term subsets with the marker put up front, enumerated by subset size and
then lexicographically, so query k means the same thing on every run
and every engine.
"""

from innometer import SearchPattern, count_queries, enumerate_queries, render_query

pattern = SearchPattern(
    marker="eye",
    terms=("optic nerve", "polymer base", "treatment", "electrostimulation"),
)

print(f"{pattern.n_terms} key terms expand into {count_queries(pattern.n_terms)} queries:\n")
for query in enumerate_queries(pattern):
    print(f"  {query.index:>2}  {render_query(query, pattern)}")

print("\nthe same queries for an engine that wants explicit operators:\n")
for query in enumerate_queries(pattern)[:3]:
    print(f"  {query.index:>2}  {render_query(query, pattern, dialect='conjunctive')}")
