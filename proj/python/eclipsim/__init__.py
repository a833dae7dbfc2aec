# Copyright (c) 2026 The eclipsim developers
# Distributed under the MIT software license, see the accompanying file LICENSE.

"""Kademlia-style discovery eclipse-attack simulator and analysis toolkit."""

from ._eclipsim import *  # noqa: F401,F403
from ._eclipsim import __doc__  # noqa: F401
