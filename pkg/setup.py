"""
Link prediction on graphs can be improved by visual structural features
(VSFs): the k-hop subgraph around a link or a node is drawn as an image and
a vision encoder turns the image into a feature vector. This package renders
such images, encodes them, keeps per-node VSFs in reusable repositories and
integrates them into message-passing link predictors. Additionally, it
provides probes that measure how much structure VSFs carry.

For most users, function `vislink.run_experiment()` and the `vislink`
command should complete the main task at hand, i.e. training and testing a
configured link predictor.
"""
from setuptools import setup


def load_requirements():
    with open('requirements.txt') as f:
        return f.read().splitlines()


setup(
    name='vislink',
    version='0.1.0',
    packages=['vislink', 'vislink.modeling', 'vislink.rendering', 'tests'],
    install_requires=load_requirements(),
    entry_points={'console_scripts': ['vislink = vislink.cli:main']},
    license='MIT license',
    description='A Python tool for link prediction with visual structural '
                'features of rendered subgraphs.'
)
