import pytest

from feec.simplicial import build_complex


@pytest.fixture
def two_triangles():
    """[0,1,2] and [1,2,3] sharing the edge [1,2]"""
    return build_complex([[0, 1, 2], [1, 2, 3]])


@pytest.fixture
def tetrahedron():
    return build_complex([[0, 1, 2, 3]])


@pytest.fixture
def mesh_file(tmp_path):
    def write(text, name="mesh.json"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return write
