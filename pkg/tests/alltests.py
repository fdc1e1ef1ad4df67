# -*- coding: utf-8 -*-
#
# Copyright (c) 2026 -- sidforge authors
# All rights reserved.
#
# License: BSD License
#
"""\
Executes all tests.
"""
if __name__ == '__main__':
    import pytest
    pytest.main()
