import numpy as np
import pytest

from tsadvkit.models import ModelSpec, train
from tsadvkit.series import LabeledDataset, znormalize_matrix
from tsadvkit.synthetic import train_test_datasets


def znormed(dataset: LabeledDataset) -> LabeledDataset:
    return LabeledDataset(
        znormalize_matrix(dataset.X), dataset.y, dataset.num_classes, dataset.original_labels
    )


@pytest.fixture(scope="session")
def bump_data():
    train_set, test_set = train_test_datasets(seed=0)
    return znormed(train_set), znormed(test_set)


@pytest.fixture(scope="session")
def small_data():
    """Smaller split for tests that retrain models repeatedly."""
    train_set, test_set = train_test_datasets(
        train_per_class=12, test_per_class=12, seed=7
    )
    return znormed(train_set), znormed(test_set)


@pytest.fixture(scope="session")
def trained_conv(small_data):
    train_set, _ = small_data
    return train(train_set, ModelSpec(epochs=80, seed=3))


@pytest.fixture(scope="session")
def trained_linear(small_data):
    train_set, _ = small_data
    return train(train_set, ModelSpec(architecture="softmax_linear", epochs=80, seed=3))


@pytest.fixture(scope="session")
def bump_shapelets(small_data):
    from tsadvkit.shapelets import MinerConfig, mine_class_shapelets

    train_set, _ = small_data
    return mine_class_shapelets(train_set, MinerConfig())


@pytest.fixture()
def rng():
    return np.random.default_rng(12345)
