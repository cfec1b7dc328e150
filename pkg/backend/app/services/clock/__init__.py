from .vector_clock import (
    VectorClock,
    antichain,
    concurrent,
    happened_before,
    leq,
    vc_increment,
    vc_merge,
    vc_new,
)

__all__ = [
    'VectorClock',
    'antichain',
    'concurrent',
    'happened_before',
    'leq',
    'vc_increment',
    'vc_merge',
    'vc_new',
]
