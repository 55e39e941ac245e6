import json

import numpy as np
import pytest

from gtapl import io as gio
from gtapl.core import BlockerField
from gtapl.coverage import GridSpec, mean_coverage_map
from gtapl.fitting import MeasurementSample
from gtapl.params import Environment, FrequencyBand, LinkType, ModelParams


def test_default_config_round_trip():
    text = gio.ScenarioConfig().dumps()
    assert gio.ScenarioConfig.loads(text).dumps() == text


def test_custom_config_round_trip():
    cfg = gio.ScenarioConfig(
        environment=Environment.HIGH_RISE, band=FrequencyBand.F73GHZ,
        blockers=BlockerField(0.02, 0.45, 1.75), max_path_loss_db=128.5, seed=9,
        model=(ModelParams(80.0, 1.7, 0.5), ModelParams(101.0, 2.1, 3.0)),
    )
    text = cfg.dumps()
    again = gio.ScenarioConfig.loads(text)
    assert again == cfg
    assert again.dumps() == text


def test_config_integers_normalised():
    text = json.dumps({"geometry": {"h_d": 120}, "band_ghz": 73, "environment": "Dense-Urban"})
    cfg = gio.ScenarioConfig.loads(text)
    assert cfg.h_d == 120.0 and isinstance(cfg.h_d, float)
    assert cfg.band is FrequencyBand.F73GHZ
    assert gio.ScenarioConfig.loads(cfg.dumps()).dumps() == cfg.dumps()


@pytest.mark.parametrize("doc", [
    {"colour": "red"},
    {"grid": {"x_min": 0, "x_maxx": 10}},
    {"outage": {"n_trials": 1.5}},
    {"geometry": {"h_d": 1.0}},
    {"environment": "marine"},
    {"blockers": {"lambda_density": -1}},
    {"model": {"los": {"alpha": 1, "beta": 1, "sigma_sq": 1}}},
])
def test_config_rejects(doc):
    with pytest.raises(gio.ConfigError):
        gio.ScenarioConfig.loads(json.dumps(doc))


def test_config_threshold_from_budget():
    cfg = gio.ScenarioConfig(p_t=23.0, sensitivity=-90.0)
    assert cfg.outage().max_path_loss_db == 113.0


def test_measurement_round_trip(tmp_path):
    samples = [MeasurementSample(210.5, 120.25, LinkType.LOS),
               MeasurementSample(480.0, 141.0, LinkType.NLOS)]
    path = tmp_path / "m.csv"
    gio.write_measurements(path, samples)
    assert path.read_text().splitlines()[0] == "distance_m,path_loss_db,link_type"
    assert gio.read_measurements(path) == samples


def test_measurement_case_insensitive_and_blank_lines(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("distance_m,path_loss_db,link_type\n200,120,los\n\n300,130,Nlos\n")
    got = gio.read_measurements(path)
    assert [s.link for s in got] == [LinkType.LOS, LinkType.NLOS]


def test_measurement_errors_name_lines(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text(
        "distance_m,path_loss_db,link_type\n200,120,LOS\n-5,120,LOS\n300,abc,NLOS\n400,130,XLOS\n"
    )
    with pytest.raises(gio.DataFileError) as info:
        gio.read_measurements(path)
    assert [n for n, _ in info.value.problems] == [3, 4, 5]


def test_measurement_bad_header(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("d,pl,link\n200,120,LOS\n")
    with pytest.raises(gio.DataFileError):
        gio.read_measurements(path)


def test_empty_measurement_file(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("")
    assert gio.read_measurements(path) == []


def test_raster_csv_round_trip(tmp_path):
    grid = GridSpec(-60, 60, -30, 50, 20, (5, -3, 110), 1.5)
    layer = mean_coverage_map(grid, Environment.URBAN, FrequencyBand.F28GHZ, BlockerField(0.05))
    path = tmp_path / "r.csv"
    gio.write_raster_csv(path, layer)
    lines = path.read_text().splitlines()
    assert lines[0] == "x_m,y_m,value"
    assert len(lines) == grid.n_cells + 1
    # row-major: x varies fastest
    assert [float(v) for v in lines[1].split(",")[:2]] == [-50.0, -20.0]
    assert [float(v) for v in lines[2].split(",")[:2]] == [-30.0, -20.0]
    back = gio.read_raster_csv(path, grid, layer.statistic)
    assert np.array_equal(back.values, layer.values)


def test_raster_read_rejects_wrong_grid(tmp_path):
    grid = GridSpec(0, 20, 0, 20, 10)
    layer = mean_coverage_map(grid, Environment.URBAN, FrequencyBand.F28GHZ)
    path = tmp_path / "r.csv"
    gio.write_raster_csv(path, layer)
    with pytest.raises(gio.DataFileError):
        gio.read_raster_csv(path, GridSpec(0, 20, 0, 20, 5), layer.statistic)


def test_color_ramp_endpoints():
    rgb = gio.color_ramp(np.array([[0.0, 5.0, 10.0]]))
    assert rgb[0, 0].tolist() == [0, 0, 255]
    assert rgb[0, 2].tolist() == [255, 0, 0]
    assert rgb[0, 1].tolist() == [128, 0, 128]
    assert gio.color_ramp(np.array([[3.0, 3.0]]))[0, 0].tolist() == [0, 0, 255]


def test_ppm_layout(tmp_path):
    grid = GridSpec(0, 30, 0, 20, 10)
    layer = mean_coverage_map(grid, Environment.URBAN, FrequencyBand.F28GHZ)
    path = tmp_path / "m.ppm"
    gio.write_ppm(path, layer)
    data = path.read_bytes()
    header = b"P6\n3 2\n255\n"
    assert data.startswith(header)
    pixels = np.frombuffer(data[len(header):], dtype=np.uint8).reshape(2, 3, 3)
    # top image row is the northern (max y) grid row
    assert np.array_equal(pixels, gio.color_ramp(layer.values)[::-1])


TABLE_28 = """\
   param  link  Suburban  Urban  Dense-Urban  High-rise
   alpha  NLOS    113.63  97.81        98.05      66.25
    beta  NLOS      1.16   1.87         1.86       3.30
sigma_sq  NLOS      2.58   1.69         0.59       4.48
   alpha   LOS     84.64  82.54        78.58      88.76
    beta   LOS      1.55   1.68         1.85       1.68
sigma_sq   LOS      0.12   0.79         0.49       2.47"""


def test_render_tables_layout():
    text = gio.render_tables(bands={FrequencyBand.F28GHZ})
    assert text.splitlines()[0] == "28 GHz"
    assert "\n".join(text.splitlines()[1:8]) == TABLE_28


def test_render_tables_filtered():
    text = gio.render_tables(bands={FrequencyBand.F73GHZ}, links={LinkType.LOS})
    rows = text.strip().splitlines()
    assert rows[0] == "73 GHz" and len(rows) == 5
    assert rows[2].split()[2:] == ["93.63", "90.86", "85.71", "85.49"]
