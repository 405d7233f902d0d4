import re
import runpy
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
TUTORIALS = sorted((ROOT / "tutorials").glob("*.py"))


@pytest.mark.parametrize("script", TUTORIALS, ids=[p.stem for p in TUTORIALS])
def test_tutorial_runs(script, capsys):
    runpy.run_path(str(script), run_name="__main__")
    assert capsys.readouterr().out


def test_readme_python_blocks(tmp_path, monkeypatch):
    text = (ROOT / "README.md").read_text()
    blocks = re.findall(r"```python\n(.*?)```", text, flags=re.S)
    assert blocks
    monkeypatch.chdir(tmp_path)
    for block in blocks:
        exec(compile(block, "README.md", "exec"), {})


def test_fixture_files_load():
    from deltamotif import load_device, load_graph

    assert load_graph(ROOT / "tests" / "data" / "fig2_data.txt").vertex_count == 7
    assert load_device(ROOT / "tutorials" / "data" / "device.txt").coupling.vertex_count == 35
    assert load_graph(ROOT / "tutorials" / "data" / "social.mtx").edge_count == 137
