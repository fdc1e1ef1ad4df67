#!/usr/bin/env python
# -*- coding: utf-8 -*-
#
# Copyright (c) 2026 -- sidforge authors
# All rights reserved.
#
# License: BSD License
#
"""\
Setup script.
"""
from setuptools import setup

setup()
