#!/usr/bin/env python3
# Copyright 2026 The hetpred Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Counts learnable scalars of the traffic model from its layer list.

Run once; the printed totals are frozen in tests/unit/test_nn.cpp.
"""

import sys


def affine(n_in, n_out):
    return n_out * n_in + n_out


def lstm(n_in, hidden):
    return 4 * hidden * n_in + 4 * hidden * hidden + 4 * hidden


def traffic(embed=64, edge=128, node=64, attn=64, shared_super=False):
    feature = 3
    total = 0
    total += affine(feature, embed) + lstm(embed, edge)          # spatial edges, shared
    total += 3 * (affine(feature, embed) + lstm(embed, edge))    # temporal edges per category
    total += 3 * (affine(feature, embed)                         # node feature
                  + affine(2 * edge, embed)                      # concat(h_ii, H_i)
                  + lstm(2 * embed, node))                       # instance cell
    total += 2 * affine(edge, attn)                              # query, key
    groups = 1 if shared_super else 3
    total += groups * (affine(node, embed) + lstm(embed, edge))  # super temporal edges
    total += groups * (affine(node, embed) + lstm(embed + edge, node))  # super nodes
    total += affine(2 * node, node)                              # merge
    total += affine(node, 5)                                     # gaussian head
    return total


def ed(embed=64, hidden=64):
    feature = 3
    return 2 * (affine(feature, embed) + lstm(embed, hidden)) + affine(hidden, 5)


if __name__ == "__main__":
    print("traffic default", traffic())
    print("traffic shared_super", traffic(shared_super=True))
    print("traffic tiny(3,4,3,3)", traffic(embed=3, edge=4, node=3, attn=3))
    print("ed default", ed())
    sys.exit(0)
