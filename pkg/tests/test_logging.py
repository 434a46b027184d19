import logging

from causevo.logging_config import create_logger, logger, run_log


class TestLogging:

    def test_components_are_children_of_the_package_logger(self):
        component = create_logger("FieldBuilder")
        assert component.name == "causevo.FieldBuilder"
        assert component.parent is logger
        assert not logger.propagate
        assert component.getEffectiveLevel() == logger.level

    def test_run_log_collects_component_records(self, tmp_path):
        path = tmp_path / "run.log"
        component = create_logger("tests")
        with run_log(path) as handler:
            component.warning("slack exhausted")
            assert handler in logger.handlers
        component.warning("after the run")

        text = path.read_text(encoding="utf-8")
        assert "causevo.tests - MainThread - WARNING - slack exhausted" in text
        assert "after the run" not in text
        assert not any(isinstance(h, logging.FileHandler) for h in logger.handlers)
