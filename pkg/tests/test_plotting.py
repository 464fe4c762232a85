import numpy as np

from src.core import plotting


def test_gap_grid_signs():
    re, im, gap = plotting.gap_grid(extent=2.0, resolution=5)
    assert re.shape == im.shape == gap.shape == (5, 5)
    # ratio i is inside the standard chamber, ratio -1 is inadmissible
    i_index = (3, 2)
    assert complex(re[i_index], im[i_index]) == 1j
    assert gap[i_index] > 0
    assert np.isnan(gap[2, 0])
    assert np.isnan(gap[2, 2])


def test_figures_render(output_dir):
    figure = plotting.fundamental_domain_figure(extent=2.0, resolution=21)
    assert figure.axes[0].get_title() == "Chamber of the standard heart"
    rows = [
        {"j_re": 0.0, "j_im": 1.0, "w_re": 0.1, "w_im": 1.0, "error": ""},
        {"j_re": 1.0, "j_im": 1.0, "w_re": 0.3, "w_im": 0.9, "error": ""},
        {"j_re": 2.0, "j_im": 1.0, "w_re": "", "w_im": "", "error": "failed"},
    ]
    figure = plotting.lozenge_figure(rows, {"x": -1j})
    assert len(figure.axes[0].lines) == 2
