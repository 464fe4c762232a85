#!/usr/bin/env python3
"""
staba2 - stability conditions on the A2 quiver category matched against the
periods of an elliptic fibration.
"""
from src.cli.main import main

if __name__ == "__main__":
    main()
