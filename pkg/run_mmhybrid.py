#!/usr/bin/env python
import sys

from mmhybrid.cli import main

if __name__ == "__main__":
    sys.exit(main())
