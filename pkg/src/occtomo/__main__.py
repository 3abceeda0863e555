import sys

from occtomo.cli import main

sys.exit(main())
