"""Deep feature vector augmentation for occluded image classification."""

__version__ = "0.1.0"
