import pytest

from neuromap.hwconfig import (
    HardwareConfigError,
    default_hardware,
    hardware_from_dict,
    load_hardware_config,
)


class TestDefaults:
    def test_default_hardware_matches_datasheet_constants(self):
        hw = default_hardware()
        assert (hw.mesh_width, hw.mesh_height) == (2, 2)
        assert hw.crossbar_dim == 128
        assert hw.bandwidth == 1.8e9
        assert hw.e_neuron == 50e-12
        assert hw.e_switch + 2 * hw.e_wire == 147e-12

    def test_empty_document_gives_defaults(self):
        assert hardware_from_dict({}) == default_hardware()


class TestParsing:
    def test_full_document(self):
        hw = hardware_from_dict({
            "mesh": [3, 2],
            "crossbar_dim": 64,
            "neuron_energy_pj": 40.0,
            "switch_plus_2wire_pj": 120.0,
            "bandwidth_events_per_s": 1e9,
            "i_prog_nominal_ua": 25.0,
            "t_spk_s": 2e-6,
            "r_on_ohm": 500.0,
            "r_par_ohm": 10.0,
            "nominal_conductance_s": 2e-4,
            "in_buffer_events": 16,
            "out_buffer_events": 8,
        })
        assert hw.n_tiles == 6
        assert hw.crossbar_dim == 64
        assert hw.e_neuron == 40e-12
        assert hw.e_switch == pytest.approx(40e-12)
        assert hw.i_prog_nominal == pytest.approx(25e-6)
        assert (hw.in_buffer, hw.out_buffer) == (16, 8)

    def test_explicit_split_must_be_consistent(self):
        with pytest.raises(HardwareConfigError, match="contradicts"):
            hardware_from_dict({"switch_plus_2wire_pj": 147.0,
                                "e_switch_pj": 100.0, "e_wire_pj": 100.0})
        hw = hardware_from_dict({"switch_plus_2wire_pj": 147.0,
                                 "e_switch_pj": 73.5, "e_wire_pj": 36.75})
        assert hw.e_switch == 73.5e-12

    def test_split_keys_must_come_together(self):
        with pytest.raises(HardwareConfigError, match="together"):
            hardware_from_dict({"e_switch_pj": 49.0})

    def test_unknown_keys_rejected(self):
        with pytest.raises(HardwareConfigError, match="unknown.*typo_key"):
            hardware_from_dict({"typo_key": 1})

    def test_bad_mesh_rejected(self):
        with pytest.raises(HardwareConfigError, match="mesh"):
            hardware_from_dict({"mesh": [2]})
        with pytest.raises(HardwareConfigError):
            hardware_from_dict({"mesh": [0, 2]})


class TestLoading:
    def test_load_from_file(self, tmp_path):
        cfg = tmp_path / "hw.toml"
        cfg.write_text("mesh = [1, 3]\ncrossbar_dim = 16\n")
        hw = load_hardware_config(cfg)
        assert hw.n_tiles == 3 and hw.crossbar_dim == 16

    def test_missing_file(self, tmp_path):
        with pytest.raises(HardwareConfigError, match="not found"):
            load_hardware_config(tmp_path / "absent.toml")

    def test_invalid_toml(self, tmp_path):
        cfg = tmp_path / "bad.toml"
        cfg.write_text("mesh = [1,")
        with pytest.raises(HardwareConfigError, match="TOML"):
            load_hardware_config(cfg)

    def test_shipped_sample_config_parses(self):
        hw = load_hardware_config("configs/mesh2x2_128.toml")
        assert hw == default_hardware()
