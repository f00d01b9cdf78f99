#!/usr/bin/env python
"""
Script to run the LU-invariants command line tool.
"""

import os
import runpy
import sys

if __name__ == "__main__":
    # Check if output directory exists, create if not
    output_dir = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'output')
    if not os.path.exists(output_dir):
        os.makedirs(output_dir)

    # Add the luinv directory to Python path so imports work
    luinv_path = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'luinv')
    sys.path.insert(0, luinv_path)

    # Run main.py as a script (this will execute the if __name__ == "__main__" block)
    main_path = os.path.join(luinv_path, 'main.py')
    runpy.run_path(main_path, run_name="__main__")
