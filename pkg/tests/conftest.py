import hypothesis

hypothesis.settings.register_profile(
    "polyens", deadline=None, max_examples=40, derandomize=True
)
hypothesis.settings.load_profile("polyens")
