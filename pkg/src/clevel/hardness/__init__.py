"""Instance generators and reference deciders for the two hardness gadget families."""

from .atlas import GadgetAtlas, check_atlas
from .threepart import (
    Fragment,
    LimitExceeded,
    ThreePartitionInstance,
    bucket,
    bucket_valleys,
    plug,
    plug_assignment_decide,
    receiver,
    receiver_embeddings,
    threepart_bruteforce,
    threepart_to_yclp,
)

__all__ = [
    "Fragment",
    "GadgetAtlas",
    "LimitExceeded",
    "ThreePartitionInstance",
    "bucket",
    "bucket_valleys",
    "check_atlas",
    "plug",
    "plug_assignment_decide",
    "receiver",
    "receiver_embeddings",
    "threepart_bruteforce",
    "threepart_to_yclp",
]
