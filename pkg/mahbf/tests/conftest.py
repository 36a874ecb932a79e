def pytest_configure(config):
    config.addinivalue_line(
        "markers", "slow: desk-scale training runs (deselect with '-m \"not slow\"')"
    )
