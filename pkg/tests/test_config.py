import unittest

from config import DEFAULT_TENSOR_BOUND, ENV_DEG_BOUND, ENV_LOG_LEVEL, ENV_TENSOR_BOUND, Settings
from errors import InputFormatError


class TestSettings(unittest.TestCase):
    def test_defaults(self):
        settings = Settings.from_env({})
        self.assertIsNone(settings.deg_bound)
        self.assertEqual(DEFAULT_TENSOR_BOUND, settings.tensor_bound)
        self.assertEqual("WARNING", settings.log_level)

    def test_from_env(self):
        settings = Settings.from_env({ENV_DEG_BOUND: "5", ENV_TENSOR_BOUND: "2", ENV_LOG_LEVEL: "debug"})
        self.assertEqual(Settings(5, 2, "DEBUG"), settings, "Expected values from the environment")

    def test_blank_values_take_defaults(self):
        settings = Settings.from_env({ENV_DEG_BOUND: "  ", ENV_TENSOR_BOUND: ""})
        self.assertIsNone(settings.deg_bound)
        self.assertEqual(DEFAULT_TENSOR_BOUND, settings.tensor_bound)

    def test_non_integer(self):
        with self.assertRaises(InputFormatError):
            Settings.from_env({ENV_DEG_BOUND: "two"})

    def test_invalid_values(self):
        for kwargs in ({"deg_bound": -1}, {"tensor_bound": 0}, {"log_level": "LOUD"}):
            with self.assertRaises(InputFormatError, msg=f"Expected {kwargs} to be rejected"):
                Settings(**kwargs)

    def test_degree_bound_for(self):
        self.assertEqual(6, Settings().degree_bound_for(3), "Expected 2n without an explicit bound")
        self.assertEqual(1, Settings(deg_bound=1).degree_bound_for(3))
        self.assertEqual(0, Settings(deg_bound=0).degree_bound_for(4))


if __name__ == "__main__":
    unittest.main()
