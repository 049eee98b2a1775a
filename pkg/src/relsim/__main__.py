import sys

from relsim.cli import main

sys.exit(main())
