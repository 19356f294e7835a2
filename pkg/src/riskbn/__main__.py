import sys

from riskbn.cli import main

sys.exit(main())
