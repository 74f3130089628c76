"""flowerlab: numerical flower calculus for convex bodies."""

from .bodies import (
    CertificateReport,
    ConvexBody,
    Flower,
    StarBody,
    alexandrov,
    cof,
    convexify_support,
    core_of,
    flower_from_petals,
    flower_of,
    is_flower,
    is_support_consistent,
    minkowski_sum_2d,
    petal_radial,
    polar,
    polytope_body,
    radial_of_halfspace_body,
    radial_sum,
    random_convex_body,
    reflect_star_2d,
    rotate_star_2d,
    scale_star,
    square_body,
    sup_log_distance,
    unit_ball,
    volume,
)
from .calculus import (
    Partition,
    PowerResult,
    RadialMap,
    apply_radial_map,
    check_composition_bm,
    compose,
    log_mean_0,
    power,
    power_flower,
    power_naive,
    power_partition,
    radial_compose,
    radial_product,
)
from .errors import FlowerlabError
from .inversion import (
    OffOriginBall,
    OffOriginPolytope,
    TruncatedOutCone,
    arc_points,
    cone_membership,
    invert_ball,
    invert_point,
    is_inversion_convex,
)
from .localtheory import (
    DistanceReport,
    canonical_petals,
    distance_to_ball,
    dvoretzky_search,
    global_average,
    kashin_petals,
    project_flower,
    section_flower,
    stability_check,
)
from .mixedvol import FlowerCombination, combine, expansion_check, flower_mixed_volume
from .spherecore import (
    DirectionGrid,
    Rotation,
    SubspaceBasis,
    quadrature_mean,
    random_rotation,
    random_subspace,
    sampled_sphere_grid,
    uniform_angle_grid,
)

__version__ = "0.1.0"
