"""Put the repository root on sys.path so the flat top-level packages import in tests."""

import os
import sys

sys.path.insert(0, os.path.abspath(os.path.dirname(__file__)))
