import namoplan

from ..helpers import NamoTestCase


class HashedParameterTestCase(NamoTestCase):
    def test_hash_consistency(self):
        first_parameter = namoplan.DictParameter()
        self.assertFalse(hasattr(first_parameter, "serialize_hashed"))

        second_parameter = namoplan.DictParameter(hashed=True)
        self.assertTrue(hasattr(second_parameter, "serialize_hashed"))

        serialized_first = second_parameter.serialize_hashed({"easy": 300, "hard": 100})
        serialized_second = second_parameter.serialize_hashed({"easy": 300, "hard": 100})

        self.assertEqual(serialized_first, serialized_second)
        self.assertEqual(serialized_first, "hashed_870d8c59af6d12e192a1879e247d4b83")

        serialized_first = second_parameter.serialize_hashed([10, "train", {"n": 12}])
        serialized_second = second_parameter.serialize_hashed([10, "train", {"n": 15}])

        self.assertNotEqual(serialized_first, serialized_second)
        self.assertEqual(serialized_first, "hashed_99f697ca965fa0a8500673425945238f")

    def test_with_task(self):
        class MethodTask(namoplan.Task):
            methods = namoplan.ListParameter(hashed=True)

            def output(self):
                yield self.add_to_output("report.md")

        task = MethodTask(methods=["ploi+comp", "flax", "pure / baseline"])

        self.assertTrue(task.get_output_file_name("report.md")
                        .endswith("results/methods=hashed_34797fd139bbaa181087fefa9b3fa54e/report.md"))

    def test_wrapping_twice_keeps_the_keyword(self):
        from namoplan.core.parameter import wrap_parameter
        wrap_parameter()

        parameter = namoplan.Parameter(hashed=True)
        self.assertTrue(parameter.serialize_hashed("x").startswith("hashed_"))
