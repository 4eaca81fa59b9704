"""``python -m enriqueslab``."""

import sys

from enriqueslab.cli import main


sys.exit(main())
