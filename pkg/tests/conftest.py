import json

import pytest

POSTINGS = [
    ("p01", "Logistics coordinator with strong teamwork and planning skills.", "europe", "small", "minimum"),
    ("p02", "Production supervisor who leads the team and owns planning.", "europe", "big", "high"),
    ("p03", "Supply chain analyst; teamwork, leadership and a plan for growth.", "north_america", "medium", "medium"),
    ("p04", "Maintenance technician, reliable and safe, team player.", "rest_of_world", "small", "minimum"),
    ("p05", "Distribution planner: schedule loads and support the team.", "europe", "medium", "medium"),
    ("p06", "Manufacturing engineer with teamwork and problem solving.", "north_america", "big", "high"),
    ("p07", "Transportation lead; leadership in a fast paced team.", "rest_of_world", "big", "medium"),
    ("p08", "Operations manager driving team planning and teamwork.", "north_america", "small", "high"),
    ("p09", "Logistics clerk, accurate, keeps the team schedule tidy.", "europe", "small", "minimum"),
    ("p10", "Production planner with leadership and planning skills.", "rest_of_world", "medium", "medium"),
    ("p11", "Supply chain buyer, teamwork with vendors and a growth mindset.", "north_america", "medium", "minimum"),
    ("p12", "Maintenance lead who coaches the team on problem solving.", "europe", "big", "high"),
]

LEXICON = """
[[construct]]
name = "Teamwork"
terms = ["teamwork", "team"]

[[construct]]
name = "Planning"
terms = ["planning", "plan", "schedule"]

[[construct]]
name = "Leadership"
terms = ["leadership", "lead**"]
"""


@pytest.fixture
def small_corpus(tmp_path):
    path = tmp_path / "postings.jsonl"
    with open(path, "w", encoding="utf-8") as fh:
        for pid, text, region, size, sen in POSTINGS:
            fh.write(json.dumps({"id": pid, "text": text, "region": region, "org_size": size, "seniority": sen}) + "\n")
    return path


@pytest.fixture
def small_lexicon(tmp_path):
    path = tmp_path / "small.lex"
    path.write_text(LEXICON, encoding="utf-8")
    return path


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(LINES):
            terminalreporter.write_line(line)
