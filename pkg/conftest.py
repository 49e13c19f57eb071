"""
Root conftest.py file for the entire project.
"""


def pytest_configure(config):
    """Configure pytest options."""
    config.addinivalue_line(
        "markers", "slow: acceptance-scale runs (deselect with '-m \"not slow\"')"
    )

    # Filter pydantic warnings
    config.addinivalue_line("filterwarnings", "ignore::DeprecationWarning:pydantic")
