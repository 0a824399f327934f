"""
Link prediction with visual structural features (VSFs). The k-hop
subgraph around a link or a node is drawn as an image and a vision encoder
turns the image into a VSF, which is then combined with message-passing
node representations.

Two frameworks are provided. GVN renders and encodes one image per queried
link and integrates its VSF after message passing. E-GVN renders and
encodes one image per node, once, keeps the VSFs in a repository and
integrates adapted VSFs into node attributes before message passing.

For most users, `vislink.experiment.run_experiment()` and the `vislink`
command should complete the main task at hand, i.e. training and testing a
configured model.
"""
import warnings
warnings.simplefilter('always', ImportWarning)

try:
    from .experiment import run_experiment
except ModuleNotFoundError:
    warnings.warn('Could not import `vislink.run_experiment()`!',
                  ImportWarning)

try:
    import vislink.probes
except ModuleNotFoundError:
    warnings.warn('Could not import `vislink.probes`!', ImportWarning)
